//! Big and little −1-Jacobi operators and weights, the symmetrizability
//! classifier and the Pearson equations tying a weight to an operator.
//!
//! An operator `L = F (I - R) + G1 d/dx R` (no `G0` part) is symmetric for a
//! weight `w` when
//!
//! ```text
//! w(x) G1(x) = w(-x) G1(-x)
//! w(-x) F(-x) - w(x) F(x) = d/dx [w(x) G1(x)]
//! ```
//!
//! The shape of `x G1(x) = tau1 x^2 + rho1 x + nu1` decides which closed-form
//! solution applies. Every catalogued shape is first brought to a canonical
//! form by `L -> kappa0 L` and `x -> kappa1 x`; the weight of the original
//! operator is then `w(x) = w_canon(kappa1 x)`.

use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operator::{odd_resonance, DunklOperator, OperatorParams};
use crate::rational::{exact_sqrt, int, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobiError {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("operator cannot be brought to the big -1-Jacobi form: {0}")]
    NotCanonicalizable(String),
    #[error("point x = {0} is not an interior point of the support (or its mirror)")]
    UnsupportedPoint(f64),
    #[error("operator is not symmetrizable: {0}")]
    NotSymmetrizable(String),
}

/// `(alpha, beta, c)`; `c = 0` is the little family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigJacobiParams {
    #[serde(with = "crate::rational::serde_text")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub beta: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub c: Rational,
}

impl BigJacobiParams {
    pub fn new(alpha: Rational, beta: Rational, c: Rational) -> Self {
        Self { alpha, beta, c }
    }

    pub fn little(alpha: Rational, beta: Rational) -> Self {
        Self::new(alpha, beta, Rational::zero())
    }

    /// `alpha, beta > -1` and `0 <= c < 1`.
    pub fn check_range(&self) -> Result<(), JacobiError> {
        check_exponents(&self.alpha, &self.beta)?;
        if self.c.is_negative() || self.c >= int(1) {
            return Err(JacobiError::ParameterRange(format!(
                "c = {} must lie in [0, 1)",
                self.c
            )));
        }
        Ok(())
    }
}

fn check_exponents(alpha: &Rational, beta: &Rational) -> Result<(), JacobiError> {
    if *alpha <= int(-1) {
        return Err(JacobiError::ParameterRange(format!(
            "alpha = {alpha} must exceed -1"
        )));
    }
    if *beta <= int(-1) {
        return Err(JacobiError::ParameterRange(format!(
            "beta = {beta} must exceed -1"
        )));
    }
    Ok(())
}

fn params9(v: [Rational; 9]) -> OperatorParams {
    OperatorParams::from_array(v)
}

/// `G1 = 2(x-1)(x+c)/x`, `F = -c/x^2 + (beta - alpha c)/x - (alpha + beta + 1)`.
pub fn big_operator(p: &BigJacobiParams) -> OperatorParams {
    let two = int(2);
    params9([
        int(0),
        int(0),
        -&two * &p.c,
        int(0),
        &two * (&p.c - int(1)),
        int(0),
        two,
        &p.beta - &p.alpha * &p.c,
        -(&p.alpha + &p.beta + int(1)),
    ])
}

/// Case (i), the `c = 0` member of the big family: `G1 = 2(x-1)`.
pub fn little_operator(alpha: &Rational, beta: &Rational) -> OperatorParams {
    big_operator(&BigJacobiParams::little(alpha.clone(), beta.clone()))
}

/// Case (ii): `G1 = 2x`, `F = alpha + beta + 1 - beta/x`.
pub fn case_ii_operator(alpha: &Rational, beta: &Rational) -> OperatorParams {
    params9([
        int(0),
        int(0),
        int(0),
        int(0),
        int(0),
        int(0),
        int(2),
        -beta.clone(),
        alpha + beta + int(1),
    ])
}

/// Case (iii): `G1 = 2(x-1)^2/x`, `F = x^-2 + a/x + b`.
pub fn case_iii_operator(a: &Rational, b: &Rational) -> OperatorParams {
    params9([
        int(0),
        int(0),
        int(2),
        int(0),
        int(-4),
        int(0),
        int(2),
        a.clone(),
        b.clone(),
    ])
}

/// Case (iv): `G1 = 2 - 2/x`, `F = -x^-2 - alpha/x - beta - 1`.
pub fn case_iv_operator(alpha: &Rational, beta: &Rational) -> OperatorParams {
    params9([
        int(0),
        int(0),
        int(-2),
        int(0),
        int(2),
        int(0),
        int(0),
        -alpha.clone(),
        -(beta + int(1)),
    ])
}

/// Case (v): `G1 = -2/x`, `F = -x^-2 - alpha/x - beta`.
pub fn case_v_operator(alpha: &Rational, beta: &Rational) -> OperatorParams {
    params9([
        int(0),
        int(0),
        int(-2),
        int(0),
        int(0),
        int(0),
        int(0),
        -alpha.clone(),
        -beta.clone(),
    ])
}

// ---------------------------------------------------------------------------
// Weight functions

/// Even algebraic base, raised to a real power of its absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "base", rename_all = "snake_case")]
pub enum AlgebraicBase {
    /// `1 - t^2`
    OneMinusSquare,
    /// `t^2 - s`
    SquareMinus { s: f64 },
}

impl AlgebraicBase {
    fn value(self, t: f64) -> f64 {
        match self {
            Self::OneMinusSquare => (1.0 - t) * (1.0 + t),
            Self::SquareMinus { s } => t * t - s,
        }
    }

    fn derivative(self, t: f64) -> f64 {
        match self {
            Self::OneMinusSquare => -2.0 * t,
            Self::SquareMinus { .. } => 2.0 * t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicFactor {
    #[serde(flatten)]
    pub base: AlgebraicBase,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineFactor {
    /// The factor is `(t - root)^multiplicity`.
    pub root: f64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentialFactor {
    /// `exp(coefficient * t^2)`
    Gaussian { coefficient: f64 },
    /// `exp(coefficient / (t^2 - 1))`
    InverseSquareMinusOne { coefficient: f64 },
}

impl ExponentialFactor {
    fn exponent(self, t: f64) -> f64 {
        match self {
            Self::Gaussian { coefficient } => coefficient * t * t,
            Self::InverseSquareMinusOne { coefficient } => coefficient / (t * t - 1.0),
        }
    }

    fn exponent_derivative(self, t: f64) -> f64 {
        match self {
            Self::Gaussian { coefficient } => 2.0 * coefficient * t,
            Self::InverseSquareMinusOne { coefficient } => {
                let d = t * t - 1.0;
                -2.0 * coefficient * t / (d * d)
            }
        }
    }
}

/// Real parameters of a big/little −1-Jacobi weight in canonical variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

/// A weight `w(x) = w_canon(scale * x)` where
///
/// ```text
/// w_canon(t) = constant * theta(t)^[sign_factor] * prod (t - r)^m * |t|^abs_power
///              * prod |base(t)|^e * exp(...)
/// ```
///
/// `support` is given in the original variable `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub constant: f64,
    pub sign_factor: bool,
    pub affine_factors: Vec<AffineFactor>,
    pub abs_power: f64,
    pub algebraic_factors: Vec<AlgebraicFactor>,
    pub exponential_factor: Option<ExponentialFactor>,
    pub scale: f64,
    pub support: Vec<(f64, f64)>,
    /// Set for the big and little families; quadrature keys on it.
    pub family: Option<FamilyParams>,
}

impl WeightFunction {
    fn canonical(support: Vec<(f64, f64)>) -> Self {
        Self {
            constant: 1.0,
            sign_factor: false,
            affine_factors: Vec::new(),
            abs_power: 0.0,
            algebraic_factors: Vec::new(),
            exponential_factor: None,
            scale: 1.0,
            support,
            family: None,
        }
    }

    /// Re-expresses the weight in `x` where `t = kappa1 x` was canonical.
    fn rescaled(mut self, kappa1: f64) -> Self {
        self.scale = kappa1;
        self.support = self
            .support
            .iter()
            .map(|&(a, b)| {
                let (l, r) = (a / kappa1, b / kappa1);
                if l <= r {
                    (l, r)
                } else {
                    (r, l)
                }
            })
            .collect();
        self.support.sort_by(|a, b| a.0.total_cmp(&b.0));
        self
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let t = self.scale * x;
        let mut v = self.constant;
        if self.sign_factor {
            v *= t.signum();
        }
        for a in &self.affine_factors {
            v *= (t - a.root).powi(a.multiplicity as i32);
        }
        if self.abs_power != 0.0 {
            v *= t.abs().powf(self.abs_power);
        }
        for f in &self.algebraic_factors {
            if f.exponent != 0.0 {
                v *= f.base.value(t).abs().powf(f.exponent);
            }
        }
        if let Some(e) = self.exponential_factor {
            v *= e.exponent(t).exp();
        }
        v
    }

    /// `w'(x) / w(x)` from the factor list (valid wherever `w(x) != 0`).
    pub fn log_derivative(&self, x: f64) -> f64 {
        let t = self.scale * x;
        let mut d = 0.0;
        for a in &self.affine_factors {
            d += a.multiplicity as f64 / (t - a.root);
        }
        d += self.abs_power / t;
        for f in &self.algebraic_factors {
            d += f.exponent * f.base.derivative(t) / f.base.value(t);
        }
        if let Some(e) = self.exponential_factor {
            d += e.exponent_derivative(t);
        }
        d * self.scale
    }

    /// `w'(x)`, computed from the closed-form logarithmic derivative.
    pub fn derivative(&self, x: f64) -> f64 {
        self.evaluate(x) * self.log_derivative(x)
    }

    /// Sign of `w(x)` read off factor by factor, without forming the product.
    pub fn sign_at(&self, x: f64) -> f64 {
        let t = self.scale * x;
        let mut s = self.constant.signum();
        if self.sign_factor {
            s *= t.signum();
        }
        for a in &self.affine_factors {
            if a.multiplicity % 2 == 1 {
                s *= (t - a.root).signum();
            }
        }
        s
    }

    /// `true` when `x` lies strictly inside one of the support intervals.
    pub fn is_interior(&self, x: f64) -> bool {
        self.support.iter().any(|&(a, b)| a < x && x < b)
    }

    /// `n` evenly spaced midpoints in each support interval.
    pub fn interior_samples(&self, n: usize) -> Vec<f64> {
        self.support
            .iter()
            .flat_map(|&(a, b)| (0..n).map(move |i| a + (b - a) * (i as f64 + 0.5) / n as f64))
            .collect()
    }

    /// Closed-form expression in the canonical variable `t`.
    pub fn formula(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.constant != 1.0 {
            parts.push(format!("{}", self.constant));
        }
        if self.sign_factor {
            parts.push("theta(t)".into());
        }
        for a in &self.affine_factors {
            let lin = if a.root == 0.0 {
                "t".to_string()
            } else if a.root < 0.0 {
                format!("(t+{})", -a.root)
            } else {
                format!("(t-{})", a.root)
            };
            parts.push(if a.multiplicity == 1 {
                lin
            } else {
                format!("{lin}^{}", a.multiplicity)
            });
        }
        if self.abs_power != 0.0 {
            parts.push(format!("|t|^{}", self.abs_power));
        }
        for f in &self.algebraic_factors {
            let base = match f.base {
                AlgebraicBase::OneMinusSquare => "1-t^2".to_string(),
                AlgebraicBase::SquareMinus { s } => format!("t^2-{s}"),
            };
            parts.push(format!("|{base}|^{}", f.exponent));
        }
        match self.exponential_factor {
            Some(ExponentialFactor::Gaussian { coefficient }) => {
                parts.push(format!("exp({coefficient}*t^2)"))
            }
            Some(ExponentialFactor::InverseSquareMinusOne { coefficient }) => {
                parts.push(format!("exp({coefficient}/(t^2-1))"))
            }
            None => {}
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        let body = parts.join("*");
        if self.scale == 1.0 {
            body
        } else {
            format!("{body} with t={}*x", self.scale)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weight always serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())?;
        let support: Vec<String> = self
            .support
            .iter()
            .map(|(a, b)| format!("[{a},{b}]"))
            .collect();
        write!(f, " on {}", support.join("U"))
    }
}

/// Canonical big weight for real parameters; `c = 0` gives the little weight.
fn family_weight(alpha: f64, beta: f64, c: f64) -> WeightFunction {
    let mut w = if c == 0.0 {
        let mut w = WeightFunction::canonical(vec![(-1.0, 1.0)]);
        w.abs_power = beta;
        w
    } else {
        let mut w = WeightFunction::canonical(vec![(-1.0, -c), (c, 1.0)]);
        w.sign_factor = true;
        w.affine_factors.push(AffineFactor {
            root: c,
            multiplicity: 1,
        });
        w.algebraic_factors.push(AlgebraicFactor {
            base: AlgebraicBase::SquareMinus { s: c * c },
            exponent: (beta - 1.0) / 2.0,
        });
        w
    };
    w.affine_factors.insert(
        0,
        AffineFactor {
            root: -1.0,
            multiplicity: 1,
        },
    );
    w.algebraic_factors.insert(
        0,
        AlgebraicFactor {
            base: AlgebraicBase::OneMinusSquare,
            exponent: (alpha - 1.0) / 2.0,
        },
    );
    w.family = Some(FamilyParams { alpha, beta, c });
    w
}

/// `theta(x)(x+1)(x-c)(1-x^2)^((alpha-1)/2)(x^2-c^2)^((beta-1)/2)` on `[-1,-c] U [c,1]`.
pub fn big_weight(p: &BigJacobiParams) -> Result<WeightFunction, JacobiError> {
    check_exponents(&p.alpha, &p.beta)?;
    if !p.c.is_positive() || p.c >= int(1) {
        return Err(JacobiError::ParameterRange(format!(
            "c = {} must lie in (0, 1)",
            p.c
        )));
    }
    Ok(family_weight(to_f64(&p.alpha), to_f64(&p.beta), to_f64(&p.c)))
}

/// `(x+1)(1-x^2)^((alpha-1)/2)|x|^beta` on `[-1,1]`.
pub fn little_weight(alpha: &Rational, beta: &Rational) -> Result<WeightFunction, JacobiError> {
    check_exponents(alpha, beta)?;
    Ok(family_weight(to_f64(alpha), to_f64(beta), 0.0))
}

/// Big weight (or little when `c = 0`) for a validated parameter triple.
pub fn family_weight_for(p: &BigJacobiParams) -> Result<WeightFunction, JacobiError> {
    if p.c.is_zero() {
        little_weight(&p.alpha, &p.beta)
    } else {
        big_weight(p)
    }
}

/// Case (ii): `theta(t)|t|^-(alpha+beta+2)`.
fn case_ii_weight(alpha: f64, beta: f64) -> WeightFunction {
    let mut w = WeightFunction::canonical(vec![(-1.0, 1.0)]);
    w.sign_factor = true;
    w.abs_power = -(alpha + beta + 2.0);
    w
}

/// Case (iii): `theta(t)(t+1)^2|t^2-1|^-((b+3)/2) exp((a+b+1)/(t^2-1))`.
fn case_iii_weight(a: f64, b: f64) -> WeightFunction {
    let mut w = WeightFunction::canonical(vec![(-1.0, 1.0)]);
    w.sign_factor = true;
    w.affine_factors.push(AffineFactor {
        root: -1.0,
        multiplicity: 2,
    });
    w.algebraic_factors.push(AlgebraicFactor {
        base: AlgebraicBase::SquareMinus { s: 1.0 },
        exponent: -(b + 3.0) / 2.0,
    });
    w.exponential_factor = Some(ExponentialFactor::InverseSquareMinusOne {
        coefficient: a + b + 1.0,
    });
    w
}

/// Case (iv): `theta(t)(t+1)(1-t^2)^((alpha+beta)/2)`.
fn case_iv_weight(alpha: f64, beta: f64) -> WeightFunction {
    let mut w = WeightFunction::canonical(vec![(-1.0, 1.0)]);
    w.sign_factor = true;
    w.affine_factors.push(AffineFactor {
        root: -1.0,
        multiplicity: 1,
    });
    w.algebraic_factors.push(AlgebraicFactor {
        base: AlgebraicBase::OneMinusSquare,
        exponent: (alpha + beta) / 2.0,
    });
    w
}

/// Case (v): `theta(t) exp(-beta t^2 / 2)`.
fn case_v_weight(beta: f64) -> WeightFunction {
    let mut w = WeightFunction::canonical(vec![(-1.0, 1.0)]);
    w.sign_factor = true;
    w.exponential_factor = Some(ExponentialFactor::Gaussian {
        coefficient: -beta / 2.0,
    });
    w
}

// ---------------------------------------------------------------------------
// Classification

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    GenericBig,
    LittleCase_i,
    Case_ii,
    Case_iii,
    Case_iv,
    Case_v,
    NotSymmetrizable,
    DegenerateSpectrum,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Exact parameters of the canonical representative of each catalogued case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum CanonicalParams {
    Big {
        #[serde(with = "crate::rational::serde_text")]
        alpha: Rational,
        #[serde(with = "crate::rational::serde_text")]
        beta: Rational,
        #[serde(with = "crate::rational::serde_text")]
        c: Rational,
    },
    Little {
        #[serde(with = "crate::rational::serde_text")]
        alpha: Rational,
        #[serde(with = "crate::rational::serde_text")]
        beta: Rational,
    },
    CaseII {
        #[serde(with = "crate::rational::serde_text")]
        alpha: Rational,
        #[serde(with = "crate::rational::serde_text")]
        beta: Rational,
    },
    CaseIII {
        #[serde(with = "crate::rational::serde_text")]
        a: Rational,
        #[serde(with = "crate::rational::serde_text")]
        b: Rational,
    },
    CaseIV {
        #[serde(with = "crate::rational::serde_text")]
        alpha: Rational,
        #[serde(with = "crate::rational::serde_text")]
        beta: Rational,
    },
    CaseV {
        #[serde(with = "crate::rational::serde_text")]
        alpha: Rational,
        #[serde(with = "crate::rational::serde_text")]
        beta: Rational,
    },
}

impl CanonicalParams {
    /// Operator parameters of the canonical representative.
    pub fn operator(&self) -> OperatorParams {
        match self {
            Self::Big { alpha, beta, c } => {
                big_operator(&BigJacobiParams::new(alpha.clone(), beta.clone(), c.clone()))
            }
            Self::Little { alpha, beta } => little_operator(alpha, beta),
            Self::CaseII { alpha, beta } => case_ii_operator(alpha, beta),
            Self::CaseIII { a, b } => case_iii_operator(a, b),
            Self::CaseIV { alpha, beta } => case_iv_operator(alpha, beta),
            Self::CaseV { alpha, beta } => case_v_operator(alpha, beta),
        }
    }
}

impl fmt::Display for CanonicalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Big { alpha, beta, c } => write!(f, "alpha={alpha} beta={beta} c={c}"),
            Self::Little { alpha, beta }
            | Self::CaseII { alpha, beta }
            | Self::CaseIV { alpha, beta }
            | Self::CaseV { alpha, beta } => write!(f, "alpha={alpha} beta={beta}"),
            Self::CaseIII { a, b } => write!(f, "a={a} b={b}"),
        }
    }
}

/// Exact canonical form: `params.scaled(kappa0, kappa1) == canonical.operator()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub canonical: CanonicalParams,
    #[serde(with = "crate::rational::serde_text")]
    pub kappa0: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub kappa1: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub case_tag: CaseTag,
    pub weight: Option<WeightFunction>,
    pub positive_on_symmetric_support: bool,
    pub notes: String,
    /// Exact canonical representative, when the scales are rational.
    pub canonical: Option<CanonicalForm>,
}

impl ClassificationVerdict {
    fn bare(case_tag: CaseTag, notes: impl Into<String>) -> Self {
        Self {
            case_tag,
            weight: None,
            positive_on_symmetric_support: false,
            notes: notes.into(),
            canonical: None,
        }
    }
}

impl fmt::Display for ClassificationVerdict {
    /// One machine-readable line: tag, positivity, canonical data, weight, notes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} positive={}",
            self.case_tag, self.positive_on_symmetric_support
        )?;
        if let Some(cf) = &self.canonical {
            write!(
                f,
                " {} kappa0={} kappa1={}",
                cf.canonical, cf.kappa0, cf.kappa1
            )?;
        } else if let Some(fp) = self.weight.as_ref().and_then(|w| w.family) {
            write!(f, " alpha~{} beta~{} c~{}", fp.alpha, fp.beta, fp.c)?;
        }
        if let Some(w) = &self.weight {
            write!(f, " weight=\"{w}\"")?;
        }
        if !self.notes.is_empty() {
            write!(f, " notes=\"{}\"", self.notes)?;
        }
        Ok(())
    }
}

/// Symmetric samples per support interval used by the positivity cross-check.
const SIGN_SAMPLES: usize = 64;

/// Sampled sign behaviour of `w` on its support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignSample {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SignSample {
    pub fn all_positive(&self) -> bool {
        self.negative == 0 && self.zero == 0 && self.positive > 0
    }

    pub fn changes_sign(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }
}

pub fn sample_signs(w: &WeightFunction, points: &[f64]) -> SignSample {
    let mut s = SignSample {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for &x in points {
        match w.sign_at(x) {
            v if v > 0.0 => s.positive += 1,
            v if v < 0.0 => s.negative += 1,
            _ => s.zero += 1,
        }
    }
    s
}

/// Shape of the catalogued case before the spectral check.
struct Shape {
    tag: CaseTag,
    weight: WeightFunction,
    /// Sign verdict: the weight is positive on the interior of its support.
    positive: bool,
    /// The weight is integrable near every endpoint (`alpha, beta > -1`).
    integrable: bool,
    canonical: Option<CanonicalForm>,
    notes: Vec<String>,
}

/// Classifies an operator by the symmetrizability of its `G1`.
pub fn classify(params: &OperatorParams) -> ClassificationVerdict {
    if !params.g0_vanishes() {
        return ClassificationVerdict::bare(
            CaseTag::NotSymmetrizable,
            "G0 is nonzero; a real symmetry factor requires G0 = 0",
        );
    }
    let (tau1, rho1, nu1) = (&params.tau1, &params.rho1, &params.nu1);
    if tau1.is_zero() && rho1.is_zero() && nu1.is_zero() {
        return ClassificationVerdict::bare(
            CaseTag::DegenerateSpectrum,
            "G1 = 0: every polynomial of fixed parity shares one eigenvalue",
        );
    }
    if tau1.is_zero() && nu1.is_zero() {
        return ClassificationVerdict::bare(
            CaseTag::DegenerateSpectrum,
            "G1 is a nonzero constant: all even degrees share the eigenvalue 0",
        );
    }
    let shape = match shape_of(params) {
        Ok(shape) => shape,
        Err(verdict) => return verdict,
    };

    // The sampled sign pattern must agree with the verdict derived above.
    let samples = shape.weight.interior_samples(SIGN_SAMPLES);
    let signs = sample_signs(&shape.weight, &samples);
    assert_eq!(
        signs.all_positive(),
        shape.positive,
        "internal consistency: sampled sign pattern {signs:?} contradicts the positivity verdict for {:?}",
        shape.tag
    );
    if !shape.positive && matches!(shape.tag, CaseTag::Case_ii | CaseTag::Case_iii | CaseTag::Case_iv | CaseTag::Case_v) {
        assert!(
            signs.changes_sign(),
            "internal consistency: {:?} weight shows no sign change on symmetric samples",
            shape.tag
        );
    }

    let mut notes = shape.notes;
    let mut tag = shape.tag;
    match tag {
        CaseTag::Case_iv | CaseTag::Case_v => notes.push(
            "tau0 = tau1 = 0, so every even degree has eigenvalue 0 (degenerate spectrum)".into(),
        ),
        _ => {
            if let Some(k) = odd_resonance(params) {
                notes.push(format!(
                    "shape {:?}, but lambda_{} = lambda_0 (odd resonance at k = {k})",
                    shape.tag,
                    2 * k + 1
                ));
                tag = CaseTag::DegenerateSpectrum;
            }
        }
    }
    ClassificationVerdict {
        case_tag: tag,
        positive_on_symmetric_support: shape.positive
            && shape.integrable
            && tag != CaseTag::DegenerateSpectrum,
        weight: Some(shape.weight),
        notes: notes.join("; "),
        canonical: shape.canonical,
    }
}

fn shape_of(params: &OperatorParams) -> Result<Shape, ClassificationVerdict> {
    let (tau1, rho1, nu1) = (&params.tau1, &params.rho1, &params.nu1);
    let (xi, eta) = (&params.xi, &params.eta);
    let two = int(2);

    if tau1.is_zero() {
        // nu1 != 0 here.
        return Ok(if rho1.is_zero() {
            let kappa0 = -&two / nu1;
            let kappa1 = int(1);
            let s = params.scaled(&kappa0, &kappa1);
            let (alpha, beta) = (-s.xi.clone(), -s.eta.clone());
            let weight = case_v_weight(to_f64(&beta));
            Shape {
                tag: CaseTag::Case_v,
                weight,
                positive: false,
                integrable: false,
                canonical: Some(CanonicalForm {
                    canonical: CanonicalParams::CaseV { alpha, beta },
                    kappa0,
                    kappa1,
                }),
                notes: vec!["no positive weight exists on a symmetric interval".into()],
            }
        } else {
            let kappa1 = -rho1 / nu1;
            let kappa0 = -(&two * nu1) / (rho1 * rho1);
            let s = params.scaled(&kappa0, &kappa1);
            let alpha = -s.xi.clone();
            let beta = -&s.eta - int(1);
            let weight = case_iv_weight(to_f64(&alpha), to_f64(&beta)).rescaled(to_f64(&kappa1));
            Shape {
                tag: CaseTag::Case_iv,
                weight,
                positive: false,
                integrable: false,
                canonical: Some(CanonicalForm {
                    canonical: CanonicalParams::CaseIV { alpha, beta },
                    kappa0,
                    kappa1,
                }),
                notes: vec!["w > 0 cannot hold on a symmetric interval".into()],
            }
        });
    }

    let kappa0 = &two / tau1;
    if nu1.is_zero() && rho1.is_zero() {
        let kappa1 = int(1);
        let s = params.scaled(&kappa0, &kappa1);
        let beta = -s.xi.clone();
        let alpha = &s.eta - &beta - int(1);
        return Ok(Shape {
            tag: CaseTag::Case_ii,
            integrable: false,
            weight: case_ii_weight(to_f64(&alpha), to_f64(&beta)),
            positive: false,
            canonical: Some(CanonicalForm {
                canonical: CanonicalParams::CaseII { alpha, beta },
                kappa0,
                kappa1,
            }),
            notes: vec!["weight is odd up to |x|-powers; not positive on any symmetric interval".into()],
        });
    }
    if nu1.is_zero() {
        let kappa1 = -tau1 / rho1;
        let s = params.scaled(&kappa0, &kappa1);
        let beta = s.xi.clone();
        let alpha = -&s.eta - &beta - int(1);
        let mut notes = Vec::new();
        if kappa0.is_negative() {
            notes.push("G1 = 2(1-x) form; relates to G1 = 2(x-1) by kappa0 = -1".into());
        }
        let integrable = match check_exponents(&alpha, &beta) {
            Ok(()) => true,
            Err(e) => {
                notes.push(format!("{e}; weight not integrable"));
                false
            }
        };
        let weight =
            family_weight(to_f64(&alpha), to_f64(&beta), 0.0).rescaled(to_f64(&kappa1));
        return Ok(Shape {
            tag: CaseTag::LittleCase_i,
            weight,
            positive: true,
            integrable,
            canonical: Some(CanonicalForm {
                canonical: CanonicalParams::Little { alpha, beta },
                kappa0,
                kappa1,
            }),
            notes,
        });
    }

    // tau1 nu1 != 0: x G1 is a genuine quadratic.
    let disc = rho1 * rho1 - int(4) * tau1 * nu1;
    if disc.is_negative() {
        return Err(ClassificationVerdict::bare(
            CaseTag::NotSymmetrizable,
            "x G1 has complex zeros",
        ));
    }
    if disc.is_zero() {
        let z = -rho1 / (&two * tau1);
        let kappa1 = int(1) / &z;
        let s = params.scaled(&kappa0, &kappa1);
        let (a, b) = (s.xi.clone(), s.eta.clone());
        let weight = case_iii_weight(to_f64(&a), to_f64(&b)).rescaled(to_f64(&kappa1));
        return Ok(Shape {
            tag: CaseTag::Case_iii,
            integrable: false,
            weight,
            positive: false,
            canonical: Some(CanonicalForm {
                canonical: CanonicalParams::CaseIII { a, b },
                kappa0,
                kappa1,
            }),
            notes: vec!["x G1 has coinciding zeros".into()],
        });
    }
    if rho1.is_zero() {
        return Err(ClassificationVerdict::bare(
            CaseTag::NotSymmetrizable,
            "zeros of x G1 are symmetric (c = 1): the two intervals collapse",
        ));
    }

    match exact_sqrt(&disc) {
        Some(root) => {
            let z1 = (-rho1 + &root) / (&two * tau1);
            let z2 = (-rho1 - &root) / (&two * tau1);
            let (d, other) = if z1.abs() > z2.abs() { (z1, z2) } else { (z2, z1) };
            let kappa1 = int(1) / &d;
            let c = -other / &d;
            let s = params.scaled(&kappa0, &kappa1);
            let alpha = -(&s.eta + &s.xi + int(1)) / (int(1) + &c);
            let beta = &s.xi + &alpha * &c;
            let canonical = Some(CanonicalForm {
                canonical: CanonicalParams::Big {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    c: c.clone(),
                },
                kappa0,
                kappa1: kappa1.clone(),
            });
            if !c.is_positive() {
                let mut v = ClassificationVerdict::bare(
                    CaseTag::GenericBig,
                    format!("zeros of x G1 have equal signs (c = {c}); no symmetric support"),
                );
                v.canonical = canonical;
                return Err(v);
            }
            let mut notes = Vec::new();
            let integrable = match check_exponents(&alpha, &beta) {
                Ok(()) => true,
                Err(e) => {
                    notes.push(format!("{e}; weight not integrable"));
                    false
                }
            };
            let weight = family_weight(to_f64(&alpha), to_f64(&beta), to_f64(&c))
                .rescaled(to_f64(&kappa1));
            Ok(Shape {
                tag: CaseTag::GenericBig,
                weight,
                positive: true,
                integrable,
                canonical,
                notes,
            })
        }
        None => {
            // Irrational zeros: the weight is still explicit, with real parameters.
            let (t, r) = (to_f64(tau1), to_f64(rho1));
            let sq = to_f64(&disc).sqrt();
            let z1 = (-r + sq) / (2.0 * t);
            let z2 = (-r - sq) / (2.0 * t);
            let (d, other) = if z1.abs() > z2.abs() { (z1, z2) } else { (z2, z1) };
            let k0 = 2.0 / t;
            let k1 = 1.0 / d;
            let xi_t = k0 * k1 * to_f64(xi);
            let eta_t = k0 * to_f64(eta);
            let c = -other / d;
            let alpha = -(eta_t + xi_t + 1.0) / (1.0 + c);
            let beta = xi_t + alpha * c;
            let note = "zeros of x G1 are irrational; canonical parameters are approximate";
            if c <= 0.0 {
                return Err(ClassificationVerdict::bare(
                    CaseTag::GenericBig,
                    format!("{note}; zeros have equal signs (c~{c}); no symmetric support"),
                ));
            }
            let mut notes = vec![note.to_string()];
            let integrable = alpha > -1.0 && beta > -1.0;
            if !integrable {
                notes.push(format!("alpha~{alpha} beta~{beta}; weight not integrable"));
            }
            Ok(Shape {
                tag: CaseTag::GenericBig,
                weight: family_weight(alpha, beta, c).rescaled(k1),
                positive: true,
                integrable,
                canonical: None,
                notes,
            })
        }
    }
}

/// Scales `(kappa0, kappa1)` taking a big-shaped operator (GenericBig or the
/// `c = 0` case (i)) to `G1 = 2(x-1)(x+c)/x`, together with the scaled parameters.
pub fn canonicalize(
    params: &OperatorParams,
) -> Result<(OperatorParams, Rational, Rational), JacobiError> {
    if params.tau1.is_zero() {
        return Err(JacobiError::NotCanonicalizable("tau1 = 0".into()));
    }
    let v = classify(params);
    let cf = v.canonical.ok_or_else(|| {
        JacobiError::NotCanonicalizable(format!("{}: {}", v.case_tag, v.notes))
    })?;
    match cf.canonical {
        CanonicalParams::Big { .. } | CanonicalParams::Little { .. } => {
            let scaled = params.scaled(&cf.kappa0, &cf.kappa1);
            Ok((scaled, cf.kappa0, cf.kappa1))
        }
        CanonicalParams::CaseIII { .. } => Err(JacobiError::NotCanonicalizable(
            "zeros of x G1 coincide".into(),
        )),
        other => Err(JacobiError::NotCanonicalizable(format!(
            "{other} is not of big -1-Jacobi shape"
        ))),
    }
}

/// Closed-form symmetry factor for `op`.
pub fn solve_pearson(op: &DunklOperator) -> Result<WeightFunction, JacobiError> {
    let params = op.params().ok_or_else(|| {
        JacobiError::NotSymmetrizable("operator was not built from the nine parameters".into())
    })?;
    let v = classify(params);
    match (v.case_tag, v.weight) {
        (CaseTag::NotSymmetrizable, _) => Err(JacobiError::NotSymmetrizable(v.notes)),
        (_, Some(w)) => Ok(w),
        (_, None) => Err(JacobiError::ParameterRange(v.notes)),
    }
}

// ---------------------------------------------------------------------------
// Pearson residuals

/// Defects of the two Pearson identities at one point, with magnitudes of the
/// terms involved for relative comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PearsonResidual {
    /// `w(x)G1(x) - w(-x)G1(-x)`
    pub even_defect: f64,
    /// `w(-x)F(-x) - w(x)F(x) - d/dx[w(x)G1(x)]`
    pub flux_defect: f64,
    pub even_scale: f64,
    pub flux_scale: f64,
}

impl PearsonResidual {
    pub fn values(&self) -> (f64, f64) {
        (self.even_defect, self.flux_defect)
    }

    /// Both defects divided by the size of the terms they compare.
    pub fn relative(&self) -> (f64, f64) {
        let rel = |d: f64, s: f64| if s > 0.0 { d.abs() / s } else { d.abs() };
        (
            rel(self.even_defect, self.even_scale),
            rel(self.flux_defect, self.flux_scale),
        )
    }
}

pub fn pearson_residual(
    w: &WeightFunction,
    op: &DunklOperator,
    x: f64,
) -> Result<PearsonResidual, JacobiError> {
    if x == 0.0 || !x.is_finite() || !w.is_interior(x) || !w.is_interior(-x) {
        return Err(JacobiError::UnsupportedPoint(x));
    }
    let eval = |p: &crate::laurent::LaurentPoly, x: f64| {
        p.evaluate(x).expect("x is nonzero, so Laurent evaluation succeeds")
    };
    let g1 = op.g1();
    let dg1 = g1.differentiate();
    let f = op.f();
    let (wp, wm) = (w.evaluate(x), w.evaluate(-x));
    let (gp, gm) = (eval(g1, x), eval(g1, -x));
    let (fp, fm) = (eval(f, x), eval(f, -x));
    let dwg = wp * (w.log_derivative(x) * gp + eval(&dg1, x));
    let even_defect = wp * gp - wm * gm;
    let flux_defect = wm * fm - wp * fp - dwg;
    Ok(PearsonResidual {
        even_defect,
        flux_defect,
        even_scale: (wp * gp).abs() + (wm * gm).abs(),
        flux_scale: (wm * fm).abs() + (wp * fp).abs() + dwg.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn bp(a: Rational, b: Rational, c: Rational) -> BigJacobiParams {
        BigJacobiParams::new(a, b, c)
    }

    #[test]
    fn big_operator_examples() {
        let p = big_operator(&bp(int(0), int(0), ratio(1, 2)));
        let expect = [0, 0, -1, 0, -1, 0, 2, 0, -1].map(int);
        assert_eq!(p.to_array(), expect);
        let p = big_operator(&bp(int(1), int(1), ratio(1, 2)));
        assert_eq!(p.xi, ratio(1, 2));
        assert_eq!(p.eta, int(-3));
        let little = big_operator(&bp(int(2), int(3), int(0)));
        assert!(little.nu1.is_zero());
        assert_eq!(little, little_operator(&int(2), &int(3)));
    }

    #[test]
    fn big_operator_coefficient_functions() {
        use crate::laurent::LaurentPoly;
        let (a, b, c) = (ratio(1, 2), int(2), ratio(1, 3));
        let op = DunklOperator::build(&big_operator(&bp(a.clone(), b.clone(), c.clone())));
        let g1 = LaurentPoly::from_terms([
            (1, int(2)),
            (0, int(2) * (&c - int(1))),
            (-1, int(-2) * &c),
        ]);
        let f = LaurentPoly::from_terms([
            (-2, -c.clone()),
            (-1, &b - &a * &c),
            (0, -(&a + &b + int(1))),
        ]);
        assert_eq!(op.g1(), &g1);
        assert_eq!(op.f(), &f);
        assert!(op.g0().is_zero());
    }

    #[test]
    fn big_weight_examples() {
        let w = big_weight(&bp(int(1), int(1), ratio(1, 2))).unwrap();
        assert!((w.evaluate(0.75) - 7.0 / 16.0).abs() < 1e-15);
        assert!((w.evaluate(-0.75) - 5.0 / 16.0).abs() < 1e-15);
        // beta < 1: singular at x = -c; at x = c the factor (x - c) wins.
        let w = big_weight(&bp(int(1), ratio(1, 2), ratio(1, 2))).unwrap();
        assert!(w.evaluate(-0.5 - 1e-12) > 1e2);
        assert!(w.evaluate(0.5 + 1e-12) < 1e-8);
        assert_eq!(w.support, vec![(-1.0, -0.5), (0.5, 1.0)]);
    }

    #[test]
    fn weight_range_errors() {
        for (a, b, c) in [
            (int(-1), int(0), ratio(1, 2)),
            (int(0), ratio(-3, 2), ratio(1, 2)),
            (int(0), int(0), int(0)),
            (int(0), int(0), int(1)),
            (int(0), int(0), int(-1)),
        ] {
            assert!(matches!(
                big_weight(&bp(a, b, c)),
                Err(JacobiError::ParameterRange(_))
            ));
        }
        assert!(little_weight(&int(-2), &int(0)).is_err());
        assert!(little_weight(&int(0), &int(-1)).is_err());
    }

    #[test]
    fn little_weight_examples() {
        let w = little_weight(&int(1), &int(0)).unwrap();
        for x in [-0.9, -0.3, 0.0, 0.4, 0.99] {
            assert!((w.evaluate(x) - (x + 1.0)).abs() < 1e-15);
        }
        assert_eq!(w.evaluate(0.0), 1.0);
    }

    #[test]
    fn big_weight_tends_to_little_weight() {
        let (a, b) = (ratio(1, 2), int(2));
        let little = little_weight(&a, &b).unwrap();
        for x in [-0.8, -0.3, 0.6, 0.95] {
            let target = little.evaluate(x);
            let errs: Vec<f64> = (2..=16)
                .map(|k| {
                    let w = big_weight(&bp(a.clone(), b.clone(), ratio(1, 1 << k))).unwrap();
                    (w.evaluate(x) - target).abs()
                })
                .collect();
            // O(c) approach: halving c roughly halves the error.
            for pair in errs.windows(2).skip(4) {
                assert!(pair[1] <= 0.6 * pair[0], "{errs:?}");
            }
            assert!(errs[errs.len() - 1] < 1e-4 * target.abs());
        }
    }

    #[test]
    fn classify_examples() {
        let v = classify(&big_operator(&bp(int(0), int(0), ratio(1, 2))));
        assert_eq!(v.case_tag, CaseTag::GenericBig);
        assert!(v.positive_on_symmetric_support);
        let cf = v.canonical.unwrap();
        assert_eq!((cf.kappa0, cf.kappa1), (int(1), int(1)));

        let mut p = OperatorParams::zero();
        p.rho1 = int(2);
        p.tau1 = int(-2);
        p.xi = ratio(-1, 2);
        p.eta = int(2);
        let v = classify(&p);
        assert_eq!(v.case_tag, CaseTag::LittleCase_i);
        assert!(v.positive_on_symmetric_support);
        let cf = v.canonical.unwrap();
        assert_eq!(cf.kappa0, int(-1));
        assert_eq!(
            cf.canonical,
            CanonicalParams::Little {
                alpha: ratio(1, 2),
                beta: ratio(1, 2)
            }
        );
        // Same shape with beta = -1: positive but not integrable.
        let mut q = p.clone();
        q.xi = int(1);
        let v = classify(&q);
        assert_eq!(v.case_tag, CaseTag::LittleCase_i);
        assert!(!v.positive_on_symmetric_support);

        let mut p = big_operator(&bp(int(0), int(0), ratio(1, 2)));
        p.mu = int(1);
        assert_eq!(classify(&p).case_tag, CaseTag::NotSymmetrizable);
        assert!(classify(&p).weight.is_none());
    }

    #[test]
    fn classify_catalogued_cases() {
        let (a, b) = (ratio(1, 2), ratio(1, 3));
        let cases = [
            (case_ii_operator(&a, &b), CaseTag::Case_ii),
            (case_iii_operator(&a, &b), CaseTag::Case_iii),
            (case_iv_operator(&a, &b), CaseTag::Case_iv),
            (case_v_operator(&a, &b), CaseTag::Case_v),
        ];
        for (p, tag) in cases {
            let v = classify(&p);
            assert_eq!(v.case_tag, tag, "{v}");
            assert!(!v.positive_on_symmetric_support);
            let w = v.weight.unwrap();
            assert!(w.sign_factor);
            let cf = v.canonical.unwrap();
            assert_eq!(p.scaled(&cf.kappa0, &cf.kappa1), cf.canonical.operator());
        }
    }

    #[test]
    fn degenerate_g1_shapes() {
        assert_eq!(
            classify(&OperatorParams::zero()).case_tag,
            CaseTag::DegenerateSpectrum
        );
        let mut p = OperatorParams::zero();
        p.rho1 = int(3);
        assert_eq!(classify(&p).case_tag, CaseTag::DegenerateSpectrum);
        // Odd resonance on a case (ii) shape: 2 eta / tau1 = 3.
        let mut p = case_ii_operator(&int(1), &int(0));
        p.eta = int(3);
        let v = classify(&p);
        assert_eq!(v.case_tag, CaseTag::DegenerateSpectrum);
        assert!(v.notes.contains("lambda_3"));
    }

    #[test]
    fn generic_edge_shapes() {
        // complex zeros
        let mut p = OperatorParams::zero();
        p.tau1 = int(1);
        p.nu1 = int(1);
        assert_eq!(classify(&p).case_tag, CaseTag::NotSymmetrizable);
        // symmetric zeros +-1
        p.nu1 = int(-1);
        assert_eq!(classify(&p).case_tag, CaseTag::NotSymmetrizable);
        // zeros of equal sign (1 and 2): c = -1/2
        let mut p = OperatorParams::zero();
        p.tau1 = int(1);
        p.rho1 = int(-3);
        p.nu1 = int(2);
        let v = classify(&p);
        assert_eq!(v.case_tag, CaseTag::GenericBig);
        assert!(!v.positive_on_symmetric_support);
        assert!(v.weight.is_none());
        // irrational zeros: x^2 + x - 1
        let mut p = OperatorParams::zero();
        p.tau1 = int(2);
        p.rho1 = int(2);
        p.nu1 = int(-2);
        p.eta = int(-3);
        let v = classify(&p);
        assert_eq!(v.case_tag, CaseTag::GenericBig, "{v}");
        assert!(v.canonical.is_none());
        let fp = v.weight.as_ref().unwrap().family.unwrap();
        assert!((fp.c - (5f64.sqrt() - 1.0) / (5f64.sqrt() + 1.0)).abs() < 1e-14);
        assert!(canonicalize(&p).is_err());
    }

    #[test]
    fn canonicalize_examples() {
        let p = big_operator(&bp(int(1), int(2), ratio(1, 3)));
        let (s, k0, k1) = canonicalize(&p).unwrap();
        assert_eq!((k0, k1), (int(1), int(1)));
        assert_eq!(s, p);

        // G1 = 4(x-2)(x+1)/x = 4x - 4 - 8/x
        let mut p = OperatorParams::zero();
        p.tau1 = int(4);
        p.rho1 = int(-4);
        p.nu1 = int(-8);
        p.xi = int(1);
        p.eta = int(-2);
        let (s, k0, k1) = canonicalize(&p).unwrap();
        assert_eq!(k1, ratio(1, 2));
        assert_eq!(k0, ratio(1, 2));
        assert_eq!(s.tau1, int(2));
        assert_eq!(s.rho1, int(-1));
        assert_eq!(s.nu1, int(-1));
        assert_eq!(p.scaled(&k0, &k1), s);

        let mut p = OperatorParams::zero();
        p.rho1 = int(1);
        p.nu1 = int(1);
        assert!(matches!(
            canonicalize(&p),
            Err(JacobiError::NotCanonicalizable(_))
        ));
        assert!(canonicalize(&case_iii_operator(&int(0), &int(0))).is_err());
    }

    fn assert_pearson(w: &WeightFunction, op: &DunklOperator, xs: &[f64]) {
        for &x in xs {
            let r = pearson_residual(w, op, x).unwrap();
            let (e, f) = r.relative();
            assert!(e <= 1e-12 && f <= 1e-12, "x={x}: {r:?}");
        }
    }

    #[test]
    fn pearson_examples() {
        let p = bp(int(1), int(1), ratio(1, 2));
        let op = DunklOperator::build(&big_operator(&p));
        let w = big_weight(&p).unwrap();
        let r = pearson_residual(&w, &op, 0.75).unwrap();
        assert!(r.values().0.abs() <= 1e-12 && r.values().1.abs() <= 1e-12);

        let op = DunklOperator::build(&little_operator(&int(1), &int(0)));
        let w = little_weight(&int(1), &int(0)).unwrap();
        let r = pearson_residual(&w, &op, 0.5).unwrap();
        assert!(r.values().0.abs() <= 1e-12 && r.values().1.abs() <= 1e-12);

        let p = bp(ratio(1, 2), int(2), ratio(1, 4));
        let op = DunklOperator::build(&big_operator(&p));
        let mut w = big_weight(&p).unwrap();
        w.algebraic_factors[0].exponent += 0.05;
        let r = pearson_residual(&w, &op, 0.6).unwrap();
        assert!(r.relative().1 > 1e-3);
        assert!(matches!(
            pearson_residual(&w, &op, 0.1),
            Err(JacobiError::UnsupportedPoint(_))
        ));
    }

    #[test]
    fn pearson_holds_for_every_case() {
        let xs = [-0.93, -0.71, -0.4, -0.12, 0.2, 0.55, 0.87];
        let (a, b) = (ratio(3, 2), ratio(1, 3));
        for p in [
            case_ii_operator(&a, &b),
            case_iii_operator(&a, &b),
            case_iv_operator(&a, &b),
            case_v_operator(&a, &b),
            little_operator(&a, &b),
        ] {
            let op = DunklOperator::build(&p);
            let w = solve_pearson(&op).unwrap();
            assert_pearson(&w, &op, &xs);
        }
    }

    #[test]
    fn pearson_holds_for_scaled_operators() {
        let base = big_operator(&bp(ratio(1, 2), int(1), ratio(1, 3)));
        let scaled = base.scaled(&ratio(-3, 5), &ratio(7, 4));
        let op = DunklOperator::build(&scaled);
        let w = solve_pearson(&op).unwrap();
        let xs: Vec<f64> = w.interior_samples(6);
        assert_pearson(&w, &op, &xs);
        for base in [
            case_iii_operator(&int(1), &int(2)),
            case_iv_operator(&int(1), &int(2)),
        ] {
            let op = DunklOperator::build(&base.scaled(&ratio(2, 3), &ratio(-5, 2)));
            let w = solve_pearson(&op).unwrap();
            assert_pearson(&w, &op, &w.interior_samples(6));
        }
    }

    #[test]
    fn solve_pearson_examples() {
        let p = bp(int(1), int(1), ratio(1, 2));
        let w = solve_pearson(&DunklOperator::build(&big_operator(&p))).unwrap();
        assert_eq!(w, big_weight(&p).unwrap());

        let w = solve_pearson(&DunklOperator::build(&case_v_operator(&int(1), &int(2)))).unwrap();
        assert_eq!(
            w.exponential_factor,
            Some(ExponentialFactor::Gaussian { coefficient: -1.0 })
        );
        let mut p = OperatorParams::zero();
        p.mu = int(1);
        assert!(matches!(
            solve_pearson(&DunklOperator::build(&p)),
            Err(JacobiError::NotSymmetrizable(_))
        ));
    }

    #[test]
    fn weight_json_round_trip() {
        let w = big_weight(&bp(int(1), ratio(1, 2), ratio(1, 4))).unwrap();
        let back = WeightFunction::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
        let w = case_iii_weight(1.0, 2.0);
        assert_eq!(WeightFunction::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn verdict_line_is_single_line() {
        let v = classify(&big_operator(&bp(int(0), int(0), ratio(1, 2))));
        let line = v.to_string();
        assert!(line.starts_with("GenericBig positive=true alpha=0 beta=0 c=1/2"));
        assert!(!line.contains('\n'));
        let v = classify(&case_ii_operator(&ratio(1, 2), &int(0)));
        assert!(v.to_string().starts_with("Case_ii positive=false"));
    }
}
