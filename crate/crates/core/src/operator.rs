//! First-order Dunkl-type operators `L = F(x)(I - R) + G0(x) d/dx + G1(x) d/dx R`.
//!
//! `R` is the reflection `R f(x) = f(-x)` and `(d/dx R) p` means `d/dx [p(-x)]`.
//! [`DunklOperator::build`] constructs the nine-parameter family whose members
//! map every polynomial to a polynomial of the same degree; [`eigenvalue`]
//! gives the diagonal of that action in the monomial basis.

use num::{Integer, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Polynomial};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    /// The operator produced negative powers of `x`, so it does not preserve polynomials.
    #[error("operator output has a residual term of order x^{exponent}")]
    NegativePowerResidue { exponent: i32, output: LaurentPoly },
    #[error("L x^{n} has a term x^{exponent} outside x^{n}..x^{lowest}", lowest = *n as i64 - 3)]
    ExtraSubleadingTerm { n: u32, exponent: i32 },
    #[error("L{{1}} = {0} is not a constant; the operator cannot be normalized")]
    NotNormalizable(LaurentPoly),
}

/// The nine free constants of the polynomial-preserving family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorParams {
    #[serde(with = "rational::serde_text")]
    pub mu: Rational,
    #[serde(with = "rational::serde_text")]
    pub nu0: Rational,
    #[serde(with = "rational::serde_text")]
    pub nu1: Rational,
    #[serde(with = "rational::serde_text")]
    pub rho0: Rational,
    #[serde(with = "rational::serde_text")]
    pub rho1: Rational,
    #[serde(with = "rational::serde_text")]
    pub tau0: Rational,
    #[serde(with = "rational::serde_text")]
    pub tau1: Rational,
    #[serde(with = "rational::serde_text")]
    pub xi: Rational,
    #[serde(with = "rational::serde_text")]
    pub eta: Rational,
}

impl Default for OperatorParams {
    fn default() -> Self {
        Self::zero()
    }
}

impl OperatorParams {
    pub fn zero() -> Self {
        let z = Rational::zero;
        Self {
            mu: z(),
            nu0: z(),
            nu1: z(),
            rho0: z(),
            rho1: z(),
            tau0: z(),
            tau1: z(),
            xi: z(),
            eta: z(),
        }
    }

    /// Parameters in the order `(mu, nu0, nu1, rho0, rho1, tau0, tau1, xi, eta)`.
    pub fn from_array(v: [Rational; 9]) -> Self {
        let [mu, nu0, nu1, rho0, rho1, tau0, tau1, xi, eta] = v;
        Self {
            mu,
            nu0,
            nu1,
            rho0,
            rho1,
            tau0,
            tau1,
            xi,
            eta,
        }
    }

    pub fn to_array(&self) -> [Rational; 9] {
        [
            self.mu.clone(),
            self.nu0.clone(),
            self.nu1.clone(),
            self.rho0.clone(),
            self.rho1.clone(),
            self.tau0.clone(),
            self.tau1.clone(),
            self.xi.clone(),
            self.eta.clone(),
        ]
    }

    /// Parameters of `kappa0 * L` written in the variable `t = kappa1 * x`.
    ///
    /// Coefficients transform as `G(t) -> kappa0 kappa1 G(t / kappa1)` and
    /// `F(t) -> kappa0 F(t / kappa1)`, which keeps the family closed.
    /// Panics if either scale is zero.
    pub fn scaled(&self, kappa0: &Rational, kappa1: &Rational) -> Self {
        assert!(!kappa0.is_zero() && !kappa1.is_zero(), "scales must be nonzero");
        let k1sq = kappa1 * kappa1;
        let k1cube = &k1sq * kappa1;
        Self {
            mu: kappa0 * &k1cube * &self.mu,
            nu0: kappa0 * &k1sq * &self.nu0,
            nu1: kappa0 * &k1sq * &self.nu1,
            rho0: kappa0 * kappa1 * &self.rho0,
            rho1: kappa0 * kappa1 * &self.rho1,
            tau0: kappa0 * &self.tau0,
            tau1: kappa0 * &self.tau1,
            xi: kappa0 * kappa1 * &self.xi,
            eta: kappa0 * &self.eta,
        }
    }

    /// `true` when the `G0 d/dx` part vanishes identically.
    pub fn g0_vanishes(&self) -> bool {
        self.mu.is_zero() && self.nu0.is_zero() && self.rho0.is_zero() && self.tau0.is_zero()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Nondegeneracy in the form `tau1 != ±tau0` and
/// `2 eta + (2k+1)(tau0 - tau1) != 0` for `k = 0..=n_max`, checked exactly.
pub fn check_nondegenerate(params: &OperatorParams, n_max: u32) -> bool {
    if params.tau1 == params.tau0 || params.tau1 == -&params.tau0 {
        return false;
    }
    let diff = &params.tau0 - &params.tau1;
    let two_eta = &params.eta * int(2);
    (0..=n_max).all(|k| !(&two_eta + &diff * int(2 * k as i64 + 1)).is_zero())
}

/// First `k >= 0` (over all integers, not a bounded range) with
/// `2 eta + (2k+1)(tau0 - tau1) = 0`, if any.
pub fn odd_resonance(params: &OperatorParams) -> Option<u64> {
    let diff = &params.tau0 - &params.tau1;
    if diff.is_zero() {
        return if params.eta.is_zero() { Some(0) } else { None };
    }
    // 2k + 1 = -2 eta / (tau0 - tau1)
    let odd = -(&params.eta * int(2)) / diff;
    if !odd.is_integer() || !odd.is_positive() {
        return None;
    }
    let odd = odd.to_integer();
    if odd.is_even() {
        return None;
    }
    num::ToPrimitive::to_u64(&(odd / 2u32))
}

/// `lambda_n`: `(tau0 + tau1) n` for even `n`, `2 eta + (tau0 - tau1) n` for odd `n`.
pub fn eigenvalue(params: &OperatorParams, n: u32) -> Rational {
    let n_r = int(n as i64);
    if n.is_multiple_of(2) {
        (&params.tau0 + &params.tau1) * n_r
    } else {
        &params.eta * int(2) + (&params.tau0 - &params.tau1) * n_r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalue {
    pub value: Rational,
    pub n: u32,
    pub parity: Parity,
}

impl Eigenvalue {
    pub fn of(params: &OperatorParams, n: u32) -> Self {
        Self {
            value: eigenvalue(params, n),
            n,
            parity: if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd },
        }
    }
}

/// First pair `m < n <= n_max` with `lambda_m = lambda_n`.
pub fn first_spectral_collision(params: &OperatorParams, n_max: u32) -> Option<(u32, u32)> {
    let lambdas: Vec<Rational> = (0..=n_max).map(|n| eigenvalue(params, n)).collect();
    for n in 1..=n_max as usize {
        if let Some(m) = lambdas[..n].iter().position(|l| *l == lambdas[n]) {
            return Some((m as u32, n as u32));
        }
    }
    None
}

/// `L = F (I - R) + G0 d/dx + G1 d/dx R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DunklOperator {
    f: LaurentPoly,
    g0: LaurentPoly,
    g1: LaurentPoly,
    params: Option<OperatorParams>,
}

impl DunklOperator {
    /// `G0 = mu/x^2 + nu0/x + rho0 + tau0 x`, `G1 = -mu/x^2 + nu1/x + rho1 + tau1 x`,
    /// `F = -mu/x^3 + (nu1 - nu0)/(2x^2) + xi/x + eta`.
    pub fn build(params: &OperatorParams) -> Self {
        let p = params;
        let g0 = LaurentPoly::from_terms([
            (-2, p.mu.clone()),
            (-1, p.nu0.clone()),
            (0, p.rho0.clone()),
            (1, p.tau0.clone()),
        ]);
        let g1 = LaurentPoly::from_terms([
            (-2, -p.mu.clone()),
            (-1, p.nu1.clone()),
            (0, p.rho1.clone()),
            (1, p.tau1.clone()),
        ]);
        let f = LaurentPoly::from_terms([
            (-3, -p.mu.clone()),
            (-2, (&p.nu1 - &p.nu0) / int(2)),
            (-1, p.xi.clone()),
            (0, p.eta.clone()),
        ]);
        Self {
            f,
            g0,
            g1,
            params: Some(params.clone()),
        }
    }

    /// Operator with arbitrary coefficients, not necessarily in the
    /// polynomial-preserving family. Intended for negative tests.
    pub fn from_coefficients(f: LaurentPoly, g0: LaurentPoly, g1: LaurentPoly) -> Self {
        Self {
            f,
            g0,
            g1,
            params: None,
        }
    }

    pub fn zero() -> Self {
        Self::build(&OperatorParams::zero())
    }

    pub fn f(&self) -> &LaurentPoly {
        &self.f
    }

    pub fn g0(&self) -> &LaurentPoly {
        &self.g0
    }

    pub fn g1(&self) -> &LaurentPoly {
        &self.g1
    }

    /// `None` for operators made with [`DunklOperator::from_coefficients`].
    pub fn params(&self) -> Option<&OperatorParams> {
        self.params.as_ref()
    }

    /// Applies `L` to an arbitrary Laurent polynomial, without the
    /// polynomial-output check.
    pub fn apply_laurent(&self, p: &LaurentPoly) -> LaurentPoly {
        let reflected = p.reflect();
        let jump = p - &reflected;
        &(&(&self.f * &jump) + &(&self.g0 * &p.differentiate()))
            + &(&self.g1 * &reflected.differentiate())
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial, OperatorError> {
        let out = self.apply_laurent(p.as_laurent());
        match out.valuation() {
            Some(v) if v < 0 => Err(OperatorError::NegativePowerResidue {
                exponent: v,
                output: out,
            }),
            _ => Ok(Polynomial::try_from(out).expect("valuation checked")),
        }
    }

    /// `Q1 = 2xF + G0 - G1`, `Q2 = 2x(G0 + G1)`, `Q3 = 2x^3 F + 3x^2 (G0 - G1)`,
    /// which must be polynomials of degree at most 1, 2, 3.
    pub fn verify_degree_conditions(&self) -> DegreeConditionReport {
        DegreeConditionReport::new(&self.f, &self.g0, &self.g1)
    }

    /// `(kappa1, kappa2, kappa3)`: coefficients of `x^{n-1}, x^{n-2}, x^{n-3}` in `L x^n`.
    ///
    /// Fails if `L x^n` has any term outside `x^{n-3}..=x^n`.
    pub fn kappa_coefficients(&self, n: u32) -> Result<[Rational; 3], OperatorError> {
        let image = self.apply_laurent(&LaurentPoly::x_pow(n as i32));
        let top = n as i32;
        if let Some((k, _)) = image.terms().find(|(k, _)| *k > top || *k < top - 3) {
            return Err(OperatorError::ExtraSubleadingTerm { n, exponent: k });
        }
        Ok([image.coeff(top - 1), image.coeff(top - 2), image.coeff(top - 3)])
    }
}

/// Outcome of the three low-degree consistency conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeConditionReport {
    /// `Q1, Q2, Q3`.
    pub q: [LaurentPoly; 3],
    pub pass: [bool; 3],
}

impl DegreeConditionReport {
    fn new(f: &LaurentPoly, g0: &LaurentPoly, g1: &LaurentPoly) -> Self {
        let x = LaurentPoly::x_pow(1);
        let two = int(2);
        let q1 = &(&(&x * f).scale(&two) + g0) - g1;
        let q2 = (&x * &(g0 + g1)).scale(&two);
        let q3 = &(&LaurentPoly::x_pow(3) * f).scale(&two)
            + &(&LaurentPoly::x_pow(2) * &(g0 - g1)).scale(&int(3));
        let ok = |q: &LaurentPoly, max_deg: i32| {
            q.is_polynomial() && q.degree().is_none_or(|d| d <= max_deg)
        };
        let pass = [ok(&q1, 1), ok(&q2, 2), ok(&q3, 3)];
        Self {
            q: [q1, q2, q3],
            pass,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|p| *p)
    }
}

/// The unnormalized form `L = F0 + F1 R + G0 d/dx + G1 d/dx R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralDunklOperator {
    pub f0: LaurentPoly,
    pub f1: LaurentPoly,
    pub g0: LaurentPoly,
    pub g1: LaurentPoly,
}

impl GeneralDunklOperator {
    pub fn apply_laurent(&self, p: &LaurentPoly) -> LaurentPoly {
        let reflected = p.reflect();
        &(&(&(&self.f0 * p) + &(&self.f1 * &reflected)) + &(&self.g0 * &p.differentiate()))
            + &(&self.g1 * &reflected.differentiate())
    }

    /// Shifts by the constant `L{1}` so that `L{1} = 0`, which forces `F1 = -F0`.
    /// Returns the normalized operator and the removed constant.
    pub fn normalize(&self) -> Result<(DunklOperator, Rational), OperatorError> {
        let on_one = &self.f0 + &self.f1;
        if !(on_one.is_zero() || (on_one.len() == 1 && on_one.degree() == Some(0))) {
            return Err(OperatorError::NotNormalizable(on_one));
        }
        let shift = on_one.coeff(0);
        let f = &self.f0 - &LaurentPoly::constant(shift.clone());
        Ok((
            DunklOperator::from_coefficients(f, self.g0.clone(), self.g1.clone()),
            shift,
        ))
    }
}
