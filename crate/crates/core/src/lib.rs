pub mod cli;
pub mod jacobi;
pub mod laurent;
pub mod operator;
pub mod quadrature;
pub mod rational;
pub mod solver;
