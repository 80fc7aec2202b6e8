//! Finite Laurent polynomials with exact rational coefficients.
//!
//! [`LaurentPoly`] is a sparse map from integer exponents (negative allowed) to
//! nonzero [`Rational`] coefficients. It carries the operator coefficients
//! `F`, `G0`, `G1` and every intermediate product formed while applying an
//! operator. [`Polynomial`] is the subset with no negative powers.
//!
//! Floating point only appears in [`LaurentPoly::evaluate`] and in the
//! [`FloatLaurent`] mirror, which exists for callers that hold real (possibly
//! irrational) coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("Laurent polynomial with valuation {valuation} has a pole at x = 0")]
    PoleAtZero { valuation: i32 },
    #[error("expected a polynomial, found a term x^{exponent}")]
    NegativePower { exponent: i32 },
    #[error("malformed coefficient record: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// `x^k` with unit coefficient.
    pub fn x_pow(k: i32) -> Self {
        Self::monomial(Rational::one(), k)
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, Rational)>,
    {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^k` (zero when absent).
    pub fn coeff(&self, k: i32) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest exponent, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent, `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `x^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + shift, v.clone())).collect(),
        }
    }

    /// Termwise d/dx.
    pub fn differentiate(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| (k - 1, v * Rational::from_integer((*k).into()))),
        )
    }

    /// `p(-x)`: odd-exponent coefficients change sign.
    pub fn reflect(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, if k % 2 == 0 { v.clone() } else { -v }))
                .collect(),
        }
    }

    /// Even part `(p(x) + p(-x)) / 2`.
    pub fn even_part(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| *k % 2 == 0)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Odd part `(p(x) - p(-x)) / 2`.
    pub fn odd_part(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| *k % 2 != 0)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Exact value at a rational point.
    pub fn evaluate_exact(&self, x: &Rational) -> Result<Rational, LaurentError> {
        if let Some(v) = self.valuation() {
            if v < 0 && x.is_zero() {
                return Err(LaurentError::PoleAtZero { valuation: v });
            }
        }
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            let pow = if *k >= 0 {
                num::pow(x.clone(), *k as usize)
            } else {
                num::pow(x.recip(), k.unsigned_abs() as usize)
            };
            acc += c * pow;
        }
        Ok(acc)
    }

    /// Floating-point value at `x`, by Horner separately on the nonnegative
    /// powers (in `x`) and the negative powers (in `1/x`).
    pub fn evaluate(&self, x: f64) -> Result<f64, LaurentError> {
        self.to_float().evaluate(x)
    }

    /// Nearest-double image of every coefficient.
    pub fn to_float(&self) -> FloatLaurent {
        FloatLaurent::from_terms(self.terms.iter().map(|(k, c)| (*k, rational::to_f64(c))))
    }

    pub fn is_polynomial(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// JSON array of `{exponent, numerator, denominator}` records in ascending
    /// exponent order. Numerator and denominator are decimal strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, LaurentError> {
        let records: Vec<TermRecord> =
            serde_json::from_str(text).map_err(|e| LaurentError::Malformed(e.to_string()))?;
        Self::from_records(&records)
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(k, c)| TermRecord {
                exponent: *k,
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Self, LaurentError> {
        let mut out = Self::zero();
        for r in records {
            let c = rational::parse_rational(&format!("{}/{}", r.numerator, r.denominator))
                .map_err(|e| LaurentError::Malformed(e.to_string()))?;
            out.add_term(r.exponent, c);
        }
        Ok(out)
    }
}

/// One serialized term of a [`LaurentPoly`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponent: i32,
    pub numerator: String,
    pub denominator: String,
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            match (*k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (k, true) => write!(f, "x^{k}")?,
                (k, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// A [`LaurentPoly`] with no negative powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial(LaurentPoly);

impl Polynomial {
    pub fn zero() -> Self {
        Self(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self(LaurentPoly::one())
    }

    pub fn x_pow(n: u32) -> Self {
        Self(LaurentPoly::x_pow(n as i32))
    }

    /// Dense ascending coefficients `c[0] + c[1] x + ...`.
    pub fn from_coeffs<I: IntoIterator<Item = Rational>>(coeffs: I) -> Self {
        Self(LaurentPoly::from_terms(
            coeffs.into_iter().enumerate().map(|(k, c)| (k as i32, c)),
        ))
    }

    pub fn as_laurent(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_laurent(self) -> LaurentPoly {
        self.0
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.degree().map(|d| d as u32)
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.0.coeff(k as i32)
    }

    /// Dense ascending coefficients up to the degree (empty for zero).
    pub fn coeffs(&self) -> Vec<Rational> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.0.leading_coeff().is_some_and(|c| c.is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn reflect(&self) -> Self {
        Self(self.0.reflect())
    }

    pub fn differentiate(&self) -> Self {
        Self(self.0.differentiate())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self(self.0.scale(c))
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.0
            .evaluate(x)
            .expect("polynomials have no pole at zero")
    }

    pub fn evaluate_exact(&self, x: &Rational) -> Rational {
        self.0
            .evaluate_exact(x)
            .expect("polynomials have no pole at zero")
    }
}

impl TryFrom<LaurentPoly> for Polynomial {
    type Error = LaurentError;
    fn try_from(p: LaurentPoly) -> Result<Self, LaurentError> {
        match p.valuation() {
            Some(v) if v < 0 => Err(LaurentError::NegativePower { exponent: v }),
            _ => Ok(Self(p)),
        }
    }
}

impl From<Polynomial> for LaurentPoly {
    fn from(p: Polynomial) -> LaurentPoly {
        p.0
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial(&self.0 + &rhs.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial(&self.0 - &rhs.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial(&self.0 * &rhs.0)
    }
}

/// Floating-coefficient mirror of [`LaurentPoly`], for real coefficients that
/// are not available exactly.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FloatLaurent {
    /// Lowest stored exponent; `coeffs[i]` multiplies `x^(offset + i)`.
    offset: i32,
    coeffs: Vec<f64>,
}

impl FloatLaurent {
    pub fn from_terms<I: IntoIterator<Item = (i32, f64)>>(terms: I) -> Self {
        let terms: Vec<(i32, f64)> = terms.into_iter().filter(|(_, c)| *c != 0.0).collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::default();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(lo);
        let mut coeffs = vec![0.0; (hi - lo + 1) as usize];
        for (k, c) in terms {
            coeffs[(k - lo) as usize] += c;
        }
        Self { offset: lo, coeffs }
    }

    pub fn valuation(&self) -> Option<i32> {
        self.coeffs.iter().position(|c| *c != 0.0).map(|i| self.offset + i as i32)
    }

    pub fn coeff(&self, k: i32) -> f64 {
        let i = k - self.offset;
        if i < 0 {
            return 0.0;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| (self.offset + i as i32, *c))
    }

    pub fn reflect(&self) -> Self {
        Self::from_terms(
            self.terms()
                .map(|(k, c)| (k, if k % 2 == 0 { c } else { -c })),
        )
    }

    pub fn differentiate(&self) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k - 1, c * k as f64)))
    }

    pub fn evaluate(&self, x: f64) -> Result<f64, LaurentError> {
        let v = match self.valuation() {
            None => return Ok(0.0),
            Some(v) => v,
        };
        if v < 0 && x == 0.0 {
            return Err(LaurentError::PoleAtZero { valuation: v });
        }
        let top = self.offset + self.coeffs.len() as i32 - 1;
        let mut positive = 0.0;
        for k in (0..=top.max(-1)).rev() {
            positive = positive * x + self.coeff(k);
        }
        if v >= 0 {
            return Ok(positive);
        }
        // sum_{k<0} c_k x^k = (1/x) * (c_{-1} + c_{-2}/x + ...)
        let inv = 1.0 / x;
        let mut negative = 0.0;
        for k in v..0 {
            negative = negative * inv + self.coeff(k);
        }
        Ok(positive + negative * inv)
    }
}
