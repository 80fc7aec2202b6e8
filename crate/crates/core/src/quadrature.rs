//! Inner products against big and little −1-Jacobi weights.
//!
//! The weight has algebraic endpoint singularities at `x = ±1` and `x = ±c`.
//! Pairing `x` with `-x` and substituting `y = x^2` turns
//!
//! ```text
//! ∫ g(x) w(x) dx  =  ∫_{c²}^{1} [g(x) A(x) + g(-x) B(x)] / (2x) · (1-y)^a (y-c²)^b dy
//! ```
//!
//! with `a = (alpha-1)/2`, `b = (beta-1)/2`, `A = (x+1)(x-c)`, `B = (1-x)(x+c)`.
//! For polynomial `g` the bracket over `2x` is a polynomial in `y`
//! (`(1-c) g_even + (y-c) g_odd`), so an `n`-point Gauss–Jacobi rule in `y`
//! integrates `g` exactly up to degree `4n - 2` in `x`. Mapping the rule back
//! gives nodes `±x_i` with positive weights.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;
use twofloat::TwoFloat;

use crate::jacobi::{FamilyParams, WeightFunction};
use crate::laurent::Polynomial;
use crate::operator::{DunklOperator, OperatorError};
use crate::rational::{from_f64, to_f64, Rational};
use num::{BigInt, Integer, One, Zero};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("weight is not integrable: {0}")]
    NonIntegrable(String),
    #[error("quadrature supports only positive big/little -1-Jacobi weights: {0}")]
    UnsupportedWeight(String),
    #[error("numerical breakdown at n = {n}: h_n = {h_n:e}")]
    NumericalBreakdown { n: usize, h_n: f64 },
    #[error("order {order} integrates degree <= {exact} exactly, integrand has degree {degree}")]
    OrderTooLow {
        order: usize,
        exact: usize,
        degree: usize,
    },
    #[error("polynomial {index} is not monic of degree {index}")]
    NotMonicSequence { index: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Arithmetic used for polynomial evaluation and accumulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    /// Polynomials are evaluated exactly at each (exactly representable)
    /// node and rounded to double-double; products and the weighted sum are
    /// carried in double-double. Monomial coefficients of orthogonal
    /// polynomials cancel heavily on the support, so plain Horner — even in
    /// double-double — loses digits that this keeps.
    #[default]
    DoubleDouble,
}

/// Default node count for an integrand of the given degree.
pub fn default_order(degree: usize) -> usize {
    (degree + 10).max(40)
}

/// Largest degree in `x` integrated exactly by an `order`-point rule.
pub fn exactness_degree(order: usize) -> usize {
    (4 * order).saturating_sub(2)
}

// ---------------------------------------------------------------------------
// Gauss–Jacobi on [-1, 1]

/// `∫_{-1}^{1} (1-s)^a (1+s)^b ds`.
fn jacobi_mass(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(a + b + 2.0))
    .exp()
}

/// Monic recurrence `p_{k+1} = (s - diag_k) p_k - off_k p_{k-1}` for
/// `k < n`, with `off[0]` the total mass.
fn jacobi_recurrence(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n + 1);
    off.push(jacobi_mass(a, b));
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        diag.push(if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b - a) * (b + a) / (s * (s + 2.0))
        });
        let k1 = kf + 1.0;
        let s1 = 2.0 * k1 + a + b;
        off.push(if k == 0 {
            // the (k+a+b)/(2k+a+b-1) factor cancels at k = 1
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
        } else {
            4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0))
        });
    }
    (diag, off)
}

/// Orthonormal values `p_0(s)..p_n(s)` and `p_n'(s)`.
fn orthonormal_values(diag: &[f64], off: &[f64], n: usize, s: f64) -> (Vec<f64>, f64) {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0 / off[0].sqrt());
    let (mut prev, mut dprev) = (0.0, 0.0);
    let mut dcur = 0.0;
    for k in 0..n {
        let cur = p[k];
        let sb_prev = if k == 0 { 0.0 } else { off[k].sqrt() };
        let sb_next = off[k + 1].sqrt();
        let next = ((s - diag[k]) * cur - sb_prev * prev) / sb_next;
        let dnext = (cur + (s - diag[k]) * dcur - sb_prev * dprev) / sb_next;
        prev = cur;
        dprev = dcur;
        dcur = dnext;
        p.push(next);
    }
    (p, dcur)
}

/// `n`-point Gauss–Jacobi rule for `(1-s)^a (1+s)^b` on `[-1,1]`.
///
/// Nodes are eigenvalues of the Jacobi matrix, refined by Newton steps on the
/// orthonormal recurrence; weights are Christoffel numbers `1 / sum p_k(s)^2`.
pub fn gauss_jacobi(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && a > -1.0 && b > -1.0);
    let (diag, off) = jacobi_recurrence(a, b, n);
    let jm = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j || j + 1 == i {
            off[i.max(j)].sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    let weights = nodes
        .iter_mut()
        .map(|s| {
            for _ in 0..3 {
                let (p, dp) = orthonormal_values(&diag, &off, n, *s);
                let step = p[n] / dp;
                let refined = (*s - step).clamp(-1.0, 1.0);
                if !refined.is_finite() {
                    break;
                }
                *s = refined;
                if step.abs() <= f64::EPSILON * s.abs().max(1e-300) {
                    break;
                }
            }
            let (p, _) = orthonormal_values(&diag, &off, n, *s);
            1.0 / p[..n].iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    (nodes, weights)
}

// ---------------------------------------------------------------------------
// Rules on the −1-Jacobi supports

fn family_of(w: &WeightFunction) -> Result<FamilyParams, QuadratureError> {
    let fam = w.family.ok_or_else(|| {
        QuadratureError::UnsupportedWeight(format!("{w} has no positive symmetric support"))
    })?;
    if !(fam.alpha > -1.0) || !(fam.beta > -1.0) {
        return Err(QuadratureError::NonIntegrable(format!(
            "alpha = {}, beta = {} (both must exceed -1)",
            fam.alpha, fam.beta
        )));
    }
    if !(0.0..1.0).contains(&fam.c) {
        return Err(QuadratureError::UnsupportedWeight(format!(
            "c = {} outside [0, 1)",
            fam.c
        )));
    }
    if !(w.constant > 0.0) || w.scale == 0.0 || !w.scale.is_finite() {
        return Err(QuadratureError::UnsupportedWeight(format!(
            "constant {} / scale {} do not give a positive weight",
            w.constant, w.scale
        )));
    }
    Ok(fam)
}

/// Nodes and positive weights realizing `∫ f(x) w(x) dx` over the support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub target: WeightFunction,
    /// Gauss–Jacobi points in `y = x^2`; the rule has `2 * order` nodes.
    pub order: usize,
}

impl QuadratureRule {
    pub fn new(w: &WeightFunction, order: usize) -> Result<Self, QuadratureError> {
        let fam = family_of(w)?;
        let order = order.max(1);
        let (a, b, c) = ((fam.alpha - 1.0) / 2.0, (fam.beta - 1.0) / 2.0, fam.c);
        let (s_nodes, s_weights) = gauss_jacobi(a, b, order);
        let half = (1.0 - c * c) / 2.0;
        let jac = half.powf(a + b + 1.0);
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(2 * order);
        for (&s, &ws) in s_nodes.iter().zip(&s_weights) {
            let above = half * (1.0 + s); // y - c^2
            let below = half * (1.0 - s); // 1 - y
            let y = c * c + above;
            let x = y.sqrt();
            let one_minus_x = below / (1.0 + x);
            let x_minus_c = above / (x + c);
            let big_a = (x + 1.0) * x_minus_c;
            let big_b = one_minus_x * (x + c);
            let wy = ws * jac / (2.0 * x);
            pairs.push((x, wy * big_a));
            pairs.push((-x, wy * big_b));
        }
        // Back to the original variable: w(x) = C w_canon(scale x).
        let factor = w.constant / w.scale.abs();
        for p in &mut pairs {
            p.0 /= w.scale;
            p.1 *= factor;
        }
        pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self {
            nodes,
            weights,
            target: w.clone(),
            order,
        })
    }

    pub fn exactness_degree(&self) -> usize {
        exactness_degree(self.order)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `∫ p(x) w(x) dx`, exact up to rounding when `deg p <= exactness_degree()`.
    pub fn integrate_polynomial(
        &self,
        p: &Polynomial,
        precision: Precision,
    ) -> Result<f64, QuadratureError> {
        let degree = p.degree().unwrap_or(0) as usize;
        if degree > self.exactness_degree() {
            return Err(QuadratureError::OrderTooLow {
                order: self.order,
                exact: self.exactness_degree(),
                degree,
            });
        }
        Ok(match precision {
            Precision::Double => {
                let coeffs: Vec<f64> = p.coeffs().iter().map(to_f64).collect();
                self.integrate(|x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
            }
            Precision::DoubleDouble => self.sum_values(&self.values(p), |v| v),
        })
    }

    /// `p` at every node, exact up to the final rounding to double-double.
    pub fn values(&self, p: &Polynomial) -> Vec<TwoFloat> {
        let exact = ExactPolynomial::new(p);
        self.nodes.iter().map(|&x| exact.evaluate(x)).collect()
    }

    /// `∫ p q w dx` from node values of `p` and `q` (see [`Self::values`]).
    /// The product is commutative, so swapping the arguments gives the same
    /// bits.
    pub fn integrate_product(&self, p: &[TwoFloat], q: &[TwoFloat]) -> f64 {
        let mut sum = TwoFloat::from(0.0);
        for ((&w, &a), &b) in self.weights.iter().zip(p).zip(q) {
            sum += a * b * w;
        }
        f64::from(sum)
    }

    fn sum_values(&self, values: &[TwoFloat], f: impl Fn(TwoFloat) -> TwoFloat) -> f64 {
        let mut sum = TwoFloat::from(0.0);
        for (&w, &v) in self.weights.iter().zip(values) {
            sum += f(v) * w;
        }
        f64::from(sum)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Metadata {
            order: usize,
            node_count: usize,
            exactness_degree: usize,
            jacobi_exponents: (f64, f64),
        }
        #[derive(Serialize)]
        struct Out<'a> {
            metadata: Metadata,
            nodes: &'a [f64],
            weights: &'a [f64],
            target: &'a WeightFunction,
        }
        let fam = self.target.family.expect("rules are built from family weights");
        serde_json::to_string_pretty(&Out {
            metadata: Metadata {
                order: self.order,
                node_count: self.nodes.len(),
                exactness_degree: self.exactness_degree(),
                jacobi_exponents: ((fam.alpha - 1.0) / 2.0, (fam.beta - 1.0) / 2.0),
            },
            nodes: &self.nodes,
            weights: &self.weights,
            target: &self.target,
        })
        .expect("rule always serializes")
    }
}

/// Integer-coefficient form `p = (sum a_k x^k) / denom` for exact evaluation
/// at binary fractions without any gcd work in the inner loop.
struct ExactPolynomial {
    numerators: Vec<BigInt>,
    denom: BigInt,
}

impl ExactPolynomial {
    fn new(p: &Polynomial) -> Self {
        let coeffs = p.coeffs();
        let denom = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        Self { numerators, denom }
    }

    /// Nearest double-double to `p(x)`, `x` taken as its exact binary value.
    fn evaluate(&self, x: f64) -> TwoFloat {
        if self.numerators.is_empty() {
            return TwoFloat::from(0.0);
        }
        let Some(x) = from_f64(x) else {
            return TwoFloat::from(f64::NAN);
        };
        let (m, q) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut q_pow = BigInt::one();
        for a in self.numerators.iter().rev() {
            acc = acc * m + a * &q_pow;
            q_pow *= q;
        }
        // `acc` gathered one power of q too many on the last step
        let value = Rational::new_raw(acc, &self.denom * (q_pow / q));
        let hi = to_f64(&value);
        let lo = from_f64(hi).map_or(0.0, |h| to_f64(&(value - h)));
        TwoFloat::new_add(hi, lo)
    }
}

fn degree_of(p: &Polynomial) -> usize {
    p.degree().unwrap_or(0) as usize
}

fn rule_for(
    w: &WeightFunction,
    degree: usize,
    order: Option<usize>,
) -> Result<QuadratureRule, QuadratureError> {
    let order = order.unwrap_or_else(|| default_order(degree));
    if exactness_degree(order) < degree {
        return Err(QuadratureError::OrderTooLow {
            order,
            exact: exactness_degree(order),
            degree,
        });
    }
    QuadratureRule::new(w, order)
}

/// `∫ p q w dx` over the support (double-double evaluation).
pub fn inner_product(
    w: &WeightFunction,
    p: &Polynomial,
    q: &Polynomial,
    order: Option<usize>,
) -> Result<f64, QuadratureError> {
    inner_product_with(w, p, q, order, Precision::default())
}

pub fn inner_product_with(
    w: &WeightFunction,
    p: &Polynomial,
    q: &Polynomial,
    order: Option<usize>,
    precision: Precision,
) -> Result<f64, QuadratureError> {
    let rule = rule_for(w, degree_of(p) + degree_of(q), order)?;
    Ok(match precision {
        // The exact product makes <p, q> and <q, p> the same computation.
        Precision::Double => rule.integrate_polynomial(&(p * q), precision)?,
        Precision::DoubleDouble => rule.integrate_product(&rule.values(p), &rule.values(q)),
    })
}

/// `∫ x^n w(x) dx`.
pub fn moment(w: &WeightFunction, n: u32) -> Result<f64, QuadratureError> {
    inner_product(w, &Polynomial::one(), &Polynomial::x_pow(n), None)
}

/// Inner products `<p_i, p_j>_w` of a list of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    pub basis: Vec<Polynomial>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Diagonal entry `h_n = <p_n, p_n>`.
    pub fn h(&self, n: usize) -> f64 {
        self.entries[(n, n)]
    }

    /// `max_{n != m} |G_nm| / sqrt(G_nn G_mm)`.
    pub fn max_normalized_offdiagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let scale = (self.h(i) * self.h(j)).abs().sqrt();
                    worst = worst.max(self.entries[(i, j)].abs() / scale);
                }
            }
        }
        worst
    }

    pub fn is_positive_definite(&self) -> bool {
        self.entries.clone().cholesky().is_some()
    }

    /// Rows of comma-separated entries under an `n` index header, `%e`-free
    /// plain decimal output via Rust's shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let n = self.dim();
        let mut out = String::from("n");
        for j in 0..n {
            out.push_str(&format!(",m{j}"));
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&i.to_string());
            for j in 0..n {
                out.push_str(&format!(",{:?}", self.entries[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

/// Gram matrix of `polys` under `w`. Entries are computed in parallel; each
/// one is a fixed-order sum, so the result does not depend on scheduling.
pub fn gram_matrix(
    w: &WeightFunction,
    polys: &[Polynomial],
    order: Option<usize>,
) -> Result<GramMatrix, QuadratureError> {
    let max_deg = polys.iter().map(degree_of).max().unwrap_or(0);
    let rule = rule_for(w, 2 * max_deg, order)?;
    let n = polys.len();
    let at_nodes: Vec<Vec<TwoFloat>> = polys.par_iter().map(|p| rule.values(p)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| rule.integrate_product(&at_nodes[i], &at_nodes[j]))
        .collect();
    let mut entries = DMatrix::zeros(n, n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        entries[(i, j)] = v;
        entries[(j, i)] = v;
    }
    Ok(GramMatrix {
        entries,
        basis: polys.to_vec(),
    })
}

/// The two sides of `<L V, W> = <V, L W>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryResidual {
    pub lv_w: f64,
    pub v_lw: f64,
}

impl SymmetryResidual {
    pub fn residual(&self) -> f64 {
        self.lv_w - self.v_lw
    }

    /// `|residual| / (|<LV,W>| + |<V,LW>| + 1)`.
    pub fn relative(&self) -> f64 {
        self.residual().abs() / (self.lv_w.abs() + self.v_lw.abs() + 1.0)
    }
}

pub fn symmetry_residual(
    w: &WeightFunction,
    op: &DunklOperator,
    v: &Polynomial,
    u: &Polynomial,
    order: Option<usize>,
) -> Result<SymmetryResidual, QuadratureError> {
    let lv = op.apply(v)?;
    let lu = op.apply(u)?;
    let degree = (degree_of(&lv) + degree_of(u)).max(degree_of(v) + degree_of(&lu));
    let rule = rule_for(w, degree, order)?;
    Ok(SymmetryResidual {
        lv_w: rule.integrate_product(&rule.values(&lv), &rule.values(u)),
        v_lw: rule.integrate_product(&rule.values(v), &rule.values(&lu)),
    })
}

/// `x P_n = P_{n+1} + b_n P_n + u_n P_{n-1}`; `u_0` is absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceRow {
    pub n: usize,
    pub b: f64,
    pub u: Option<f64>,
    pub h: f64,
}

/// Relative size below which `h_n` is indistinguishable from cancellation noise.
const BREAKDOWN_TOLERANCE: f64 = 1e-24;

/// Recurrence coefficients of a monic orthogonal sequence `polys[n]` (degree `n`):
/// `b_n = <x P_n, P_n> / h_n`, `u_n = h_n / h_{n-1}`.
pub fn recurrence_coefficients(
    w: &WeightFunction,
    polys: &[Polynomial],
    order: Option<usize>,
) -> Result<Vec<RecurrenceRow>, QuadratureError> {
    for (i, p) in polys.iter().enumerate() {
        if p.degree() != Some(i as u32) || !p.is_monic() {
            return Err(QuadratureError::NotMonicSequence { index: i });
        }
    }
    let max_deg = polys.len().saturating_sub(1);
    let rule = rule_for(w, 2 * max_deg + 1, order)?;
    let rows = polys
        .par_iter()
        .enumerate()
        .map(|(n, p)| {
            let values = rule.values(p);
            let h = rule.integrate_product(&values, &values);
            // size of the terms that cancel inside h
            let abs_p = Polynomial::from_coeffs(p.coeffs().iter().map(num::Signed::abs));
            let gross = rule.integrate(|t| {
                let v = abs_p.evaluate(t.abs());
                v * v
            });
            if !(h > BREAKDOWN_TOLERANCE * gross) {
                return Err(QuadratureError::NumericalBreakdown { n, h_n: h });
            }
            let x_values: Vec<TwoFloat> =
                values.iter().zip(&rule.nodes).map(|(&v, &x)| v * x).collect();
            let xh = rule.integrate_product(&x_values, &values);
            Ok((n, xh / h, h))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rows
        .iter()
        .map(|&(n, b, h)| RecurrenceRow {
            n,
            b,
            u: (n > 0).then(|| h / rows[n - 1].2),
            h,
        })
        .collect())
}

pub fn recurrence_csv(rows: &[RecurrenceRow]) -> String {
    let mut out = String::from("n,b_n,u_n,h_n\n");
    for r in rows {
        let u = r.u.map(|u| format!("{u:?}")).unwrap_or_default();
        out.push_str(&format!("{},{:?},{},{:?}\n", r.n, r.b, u, r.h));
    }
    out
}
