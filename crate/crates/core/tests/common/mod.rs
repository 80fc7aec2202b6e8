//! Shared corpora and reference integrators for the integration suites.
//! Nothing here calls the production quadrature code.
#![allow(dead_code)]

use dunkl::laurent::Polynomial;
use dunkl::operator::{check_nondegenerate, OperatorParams};
use dunkl::rational::{from_f64, ratio, to_f64, Rational};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random rational `p/q` with `|p| <= 9`, `1 <= q <= 6`.
pub fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    ratio(r.gen_range(-9..=9), r.gen_range(1..=6))
}

pub fn nonzero_rational(r: &mut ChaCha8Rng) -> Rational {
    loop {
        let v = small_rational(r);
        if !v.is_zero() {
            return v;
        }
    }
}

/// `count` random parameter sets passing `check_nondegenerate(_, n_max)`.
pub fn nondegenerate_corpus(seed: u64, count: usize, n_max: u32) -> Vec<OperatorParams> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = OperatorParams::from_array(std::array::from_fn(|_| small_rational(&mut r)));
        if check_nondegenerate(&p, n_max) {
            out.push(p);
        }
    }
    out
}

pub const EXPONENTS: [(i64, i64); 4] = [(0, 1), (1, 2), (1, 1), (2, 1)];
pub const CS: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];

/// `(alpha, beta)` over `{0, 1/2, 1, 2}^2`.
pub fn exponent_grid() -> Vec<(Rational, Rational)> {
    let mut v = Vec::new();
    for a in EXPONENTS {
        for b in EXPONENTS {
            v.push((ratio(a.0, a.1), ratio(b.0, b.1)));
        }
    }
    v
}

/// `(alpha, beta, c)` over the exponent grid times `{1/4, 1/2, 3/4}`, then the
/// little family (`c = 0`) over the exponent grid.
pub fn family_grid() -> Vec<(Rational, Rational, Rational)> {
    let mut v = Vec::new();
    for (a, b) in exponent_grid() {
        for c in CS {
            v.push((a.clone(), b.clone(), ratio(c.0, c.1)));
        }
    }
    for (a, b) in exponent_grid() {
        v.push((a, b, Rational::zero()));
    }
    v
}

/// Euler Beta function from libm's gamma.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    libm::tgamma(a) * libm::tgamma(b) / libm::tgamma(a + b)
}

/// Tanh-sinh quadrature of `f(y, y - lo, hi - y)` on `[lo, hi]`, halving the
/// step until two successive levels agree to `tol` relative. Endpoint
/// distances are passed separately so algebraic singularities are evaluated
/// without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(lo: f64, hi: f64, tol: f64, f: F) -> f64 {
    let half = (hi - lo) / 2.0;
    let t_max = 6.0;
    let point = |t: f64| -> f64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let (eu, emu) = (u.exp(), (-u).exp());
        let d_lo = half * 2.0 / (1.0 + (-2.0 * u).exp());
        let d_hi = half * 2.0 / (1.0 + (2.0 * u).exp());
        if d_lo <= 0.0 || d_hi <= 0.0 {
            return 0.0;
        }
        let y = if u < 0.0 { lo + d_lo } else { hi - d_hi };
        let jac = half * std::f64::consts::FRAC_PI_2 * t.cosh() * 4.0 / ((eu + emu) * (eu + emu));
        f(y, d_lo, d_hi) * jac
    };
    let mut h = 1.0;
    let mut sum = point(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += point(k as f64 * h) + point(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for level in 0..14 {
        h /= 2.0;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            sum += point(t) + point(-t);
            k += 2;
        }
        let next = sum * h;
        let done = level >= 2 && (next - estimate).abs() <= tol * next.abs();
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}

/// `∫ g w` for the big (or, with `c = 0`, little) weight, via the reduction to
/// `∫_{c²}^1 [(1-c) g_e(y) + (y-c) g_o(y)] (1-y)^a (y-c²)^b dy`, where
/// `g(x) = g_e(x²) + x g_o(x²)`. The bracket is formed and evaluated exactly.
pub fn family_oracle(alpha: f64, beta: f64, c: &Rational, g: &Polynomial) -> f64 {
    let coeffs = g.coeffs();
    let mut bracket: Vec<Rational> = vec![Rational::zero(); coeffs.len() / 2 + 2];
    let one_minus_c = Rational::one() - c;
    for (k, a) in coeffs.iter().enumerate() {
        let j = k / 2;
        if k % 2 == 0 {
            bracket[j] += &one_minus_c * a;
        } else {
            bracket[j + 1] += a.clone();
            bracket[j] -= c * a;
        }
    }
    let bracket = Polynomial::from_coeffs(bracket);
    let (a, b) = ((alpha - 1.0) / 2.0, (beta - 1.0) / 2.0);
    let c2 = to_f64(&(c * c));
    tanh_sinh(c2, 1.0, 1e-13, |y, d_lo, d_hi| {
        let h = to_f64(&bracket.evaluate_exact(&from_f64(y).unwrap()));
        h * d_hi.powf(a) * d_lo.powf(b)
    })
}
