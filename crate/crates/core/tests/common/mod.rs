//! Reference computations that share no code with the library.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 24)
}

/// Integral over `[0, ∞)` of a function decaying at least exponentially,
/// through the substitution `x = u / (1 − u)`.
pub fn integrate_half_line(f: &dyn Fn(f64) -> f64, tol: f64) -> f64 {
    let g = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let x = u / (1.0 - u);
        let v = f(x) / ((1.0 - u) * (1.0 - u));
        if v.is_finite() { v } else { 0.0 }
    };
    simpson(&g, 0.0, 1.0, tol)
}

/// Q(x) for x ≥ 0 by integrating the Gaussian density.
pub fn q_oracle(x: f64) -> f64 {
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
    let shifted = |u: f64| phi(x + u);
    // The tail beyond x + 40 is below 1e-300.
    simpson(&shifted, 0.0, 40.0, 1e-13 * phi(x) / (1.0 + x))
}

/// Root of a decreasing function on `[lo, hi]`.
pub fn bisect_decreasing(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 { lo = mid } else { hi = mid }
    }
    0.5 * (lo + hi)
}

pub fn q_inv_oracle(p: f64) -> f64 {
    bisect_decreasing(&|x| q_oracle(x) - p, 0.0, 40.0)
}

/// `P(max_e X_e > Y)` by quadrature of `∫ f_Y(y) (1 − Π F_e(y)) dy`.
pub fn max_outage_oracle(lambda_y: f64, lambdas: &[f64]) -> f64 {
    let integrand = |y: f64| {
        let cdf: f64 = lambdas.iter().map(|l| 1.0 - (-l * y).exp()).product();
        lambda_y * (-lambda_y * y).exp() * (1.0 - cdf)
    };
    integrate_half_line(&integrand, 1e-14)
}

/// `P(Σ_e X_e > Y) = 1 − E[exp(−λ_y Σ X_e)]` via the Laplace transform.
pub fn sum_outage_oracle(lambda_y: f64, lambdas: &[f64]) -> f64 {
    1.0 - lambdas.iter().map(|l| l / (l + lambda_y)).product::<f64>()
}

/// Binomial upper tail by summing exact integer coefficients term by term.
pub fn binomial_tail_oracle(n: u32, t: u32, p: f64) -> f64 {
    let mut c = 1.0_f64;
    let mut below = 0.0;
    for i in 0..=t {
        if i > 0 {
            c *= (n - i + 1) as f64 / i as f64;
        }
        below += c * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
    }
    1.0 - below
}

/// Kolmogorov–Smirnov distance of a sample against a continuous CDF.
pub fn ks_distance(samples: &mut [f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
