//! Monic polynomial eigenfunctions by exact back-substitution.
//!
//! In the monomial basis a polynomial-preserving operator is upper triangular:
//! column `k` holds the coefficients of `L x^k`, with `lambda_k` on the
//! diagonal. Writing `P_n = x^n + sum_{j<n} a_j x^j`, row `j` of
//! `(L - lambda_n) P_n = 0` reads
//!
//! ```text
//! (lambda_j - lambda_n) a_j + sum_{k>j} L[j][k] a_k = 0
//! ```
//!
//! so the `a_j` follow from `j = n-1` downward whenever `lambda_j != lambda_n`.

use num::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{LaurentPoly, Polynomial, TermRecord};
use crate::operator::{DunklOperator, OperatorError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    /// `lambda_n` coincides with an earlier eigenvalue (`lambda_0 = 0` included).
    #[error("degenerate spectrum at degree {index}: lambda_{index} = lambda_{collides_with}")]
    DegenerateSpectrum { index: u32, collides_with: u32 },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("L x^{k} has no x^{k} term matching its eigenvalue")]
    NotTriangular { k: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenPolynomial {
    pub n: u32,
    pub poly: Polynomial,
    pub lambda: Rational,
}

/// `L` restricted to polynomials of degree `<= n_max`, column by column.
#[derive(Debug, Clone)]
pub struct TriangularSystem {
    columns: Vec<Polynomial>,
}

impl TriangularSystem {
    pub fn new(op: &DunklOperator, n_max: u32) -> Result<Self, SolverError> {
        let columns = (0..=n_max)
            .map(|k| {
                let col = op.apply(&Polynomial::x_pow(k))?;
                if col.degree().is_some_and(|d| d > k) {
                    return Err(SolverError::NotTriangular { k });
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>, SolverError>>()?;
        Ok(Self { columns })
    }

    pub fn n_max(&self) -> u32 {
        self.columns.len() as u32 - 1
    }

    /// Diagonal entry `lambda_k`.
    pub fn diagonal(&self, k: u32) -> Rational {
        self.columns[k as usize].coeff(k)
    }

    /// `L[j][k]`: coefficient of `x^j` in `L x^k`.
    pub fn entry(&self, j: u32, k: u32) -> Rational {
        self.columns[k as usize].coeff(j)
    }

    /// Checks every `lambda_j` with `j < n` against `lambda_n` before any division.
    pub fn check_distinct(&self, n: u32) -> Result<(), SolverError> {
        let lambda_n = self.diagonal(n);
        match (0..n).find(|&j| self.diagonal(j) == lambda_n) {
            Some(j) => Err(SolverError::DegenerateSpectrum {
                index: n,
                collides_with: j,
            }),
            None => Ok(()),
        }
    }

    pub fn solve(&self, n: u32) -> Result<EigenPolynomial, SolverError> {
        assert!(n <= self.n_max(), "degree {n} beyond system size");
        self.check_distinct(n)?;
        let lambda = self.diagonal(n);
        let mut a = vec![Rational::zero(); n as usize + 1];
        a[n as usize] = Rational::one();
        for j in (0..n).rev() {
            let mut acc = Rational::zero();
            for k in j + 1..=n {
                let entry = self.entry(j, k);
                if !entry.is_zero() && !a[k as usize].is_zero() {
                    acc += entry * &a[k as usize];
                }
            }
            if !acc.is_zero() {
                a[j as usize] = acc / (&lambda - self.diagonal(j));
            }
        }
        Ok(EigenPolynomial {
            n,
            poly: Polynomial::from_coeffs(a),
            lambda,
        })
    }
}

/// The unique monic degree-`n` eigenpolynomial of `op`.
pub fn monic_eigenpolynomial(op: &DunklOperator, n: u32) -> Result<EigenPolynomial, SolverError> {
    TriangularSystem::new(op, n)?.solve(n)
}

/// `P_0, ..., P_n_max`. Degrees are solved in parallel; the result does not
/// depend on scheduling. On failure the lowest offending degree is reported.
pub fn eigen_sequence(op: &DunklOperator, n_max: u32) -> Result<Vec<EigenPolynomial>, SolverError> {
    let system = TriangularSystem::new(op, n_max)?;
    for n in 0..=n_max {
        system.check_distinct(n)?;
    }
    (0..=n_max)
        .into_par_iter()
        .map(|n| system.solve(n))
        .collect()
}

/// `L p - lambda p`; zero certifies an eigenpair.
pub fn residual(
    op: &DunklOperator,
    p: &Polynomial,
    lambda: &Rational,
) -> Result<Polynomial, SolverError> {
    Ok(&op.apply(p)? - &p.scale(lambda))
}

/// CSV coefficient table: `degree,lambda,x^0,...,x^N`, one row per polynomial,
/// exact rationals, `0` for absent terms.
pub fn coefficient_table_csv(seq: &[EigenPolynomial]) -> String {
    let width = seq
        .iter()
        .filter_map(|e| e.poly.degree())
        .max()
        .unwrap_or(0);
    let mut out = String::from("degree,lambda");
    for k in 0..=width {
        out.push_str(&format!(",x^{k}"));
    }
    out.push('\n');
    for e in seq {
        out.push_str(&format!("{},{}", e.n, e.lambda));
        for k in 0..=width {
            out.push_str(&format!(",{}", e.poly.coeff(k)));
        }
        out.push('\n');
    }
    out
}

/// Parses a table written by [`coefficient_table_csv`].
pub fn parse_coefficient_table_csv(text: &str) -> Result<Vec<EigenPolynomial>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty table")?;
    if !header.starts_with("degree,lambda") {
        return Err(format!("unexpected header {header:?}"));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let mut fields = line.split(',');
            let n: u32 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| format!("bad degree in {line:?}"))?;
            let lambda = crate::rational::parse_rational(fields.next().unwrap_or(""))
                .map_err(|e| e.to_string())?;
            let coeffs = fields
                .map(crate::rational::parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            Ok(EigenPolynomial {
                n,
                poly: Polynomial::from_coeffs(coeffs),
                lambda,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct EigenRecord {
    degree: u32,
    lambda: String,
    coefficients: Vec<TermRecord>,
}

/// JSON array of `{degree, lambda, coefficients}` with coefficients in the
/// Laurent record format.
pub fn coefficient_table_json(seq: &[EigenPolynomial]) -> String {
    let records: Vec<EigenRecord> = seq
        .iter()
        .map(|e| EigenRecord {
            degree: e.n,
            lambda: e.lambda.to_string(),
            coefficients: LaurentPoly::from(e.poly.clone()).to_records(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("records always serialize")
}
