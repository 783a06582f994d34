//! Gaussian tail function, its inverse, and densities of the maximum and the
//! sum of independent exponential variables.
//!
//! Every closed-form power in this crate is quadratic in `Q⁻¹(t)`, so the
//! inverse is refined to full double precision rather than left at the
//! accuracy of its rational seed.

use crate::error::{domain, Error};
use crate::Result;

const SQRT_2: f64 = core::f64::consts::SQRT_2;
/// 1 / sqrt(2π)
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Relative separation below which two rates count as equal for the
/// hypoexponential partial-fraction density.
pub const HYPOEXP_RATE_TOLERANCE: f64 = 1e-9;

/// Rate parameter of an exponential random variable.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rate(f64);

impl Rate {
    /// Wraps a strictly positive, finite rate.
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Rate(lambda))
        } else {
            Err(domain("rate", lambda))
        }
    }

    /// The rate value.
    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Rate of `scale * X` where `X` is exponential with unit mean.
    pub fn of_scaled_unit_exponential(scale: f64) -> Result<Self> {
        Rate::new(1.0 / scale)
    }
}

/// Standard Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_func(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("x", x));
    }
    Ok(q_finite(x))
}

#[inline]
pub(crate) fn q_finite(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

#[inline]
fn gaussian_density(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * libm::exp(-0.5 * x * x)
}

/// Inverse of [`q_func`]: the `x` with `Q(x) = p`.
///
/// Seeded by Acklam's rational approximation of the normal quantile and
/// polished by Halley steps on `Q` itself, falling back to bisection whenever
/// a step leaves the current bracket.
pub fn q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p));
    }
    if p > 0.5 {
        // 1 - p is exact here (Sterbenz).
        return Ok(-upper_tail_inverse(1.0 - p));
    }
    Ok(upper_tail_inverse(p))
}

/// Solves `Q(x) = p` for `0 < p <= 1/2`, so `x >= 0`.
fn upper_tail_inverse(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let mut lo = 0.0_f64;
    let mut hi = 40.0_f64;
    let mut x = (-acklam_quantile(p)).clamp(lo, hi);

    for _ in 0..100 {
        let f = q_finite(x) - p;
        if f == 0.0 {
            return x;
        }
        // Q is decreasing: f > 0 means the root lies to the right of x.
        if f > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let density = gaussian_density(x);
        if density > 0.0 {
            let u = f / density;
            let denom = 1.0 - 0.5 * x * u;
            let next = if denom > 0.5 { x + u / denom } else { x + u };
            if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                return next;
            }
            if next > lo && next < hi {
                x = next;
                continue;
            }
        }
        x = 0.5 * (lo + hi);
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    x
}

/// Acklam's approximation to the standard normal quantile, |rel err| ~ 1e-9.
fn acklam_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |p: f64| {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail(p)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(1.0 - p)
    }
}

/// Chernoff bound `Q(x) <= exp(-x²/2) / 2`, valid for `x >= 0`.
pub fn chernoff_q(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(domain("x", x));
    }
    Ok(0.5 * libm::exp(-0.5 * x * x))
}

fn check_support(what: &'static str, z: f64) -> Result<()> {
    if z.is_nan() || z < 0.0 {
        Err(domain(what, z))
    } else {
        Ok(())
    }
}

/// Density of `max_e X_e` for independent exponentials `X_e ~ Exp(rates[e])`.
pub fn max_exp_pdf(rates: &[Rate], z: f64) -> Result<f64> {
    if rates.is_empty() {
        return Err(Error::Empty("rates"));
    }
    check_support("z", z)?;
    let mut total = 0.0;
    for (e, rate) in rates.iter().enumerate() {
        let lambda = rate.get();
        let mut term = lambda * libm::exp(-lambda * z);
        for (i, other) in rates.iter().enumerate() {
            if i != e {
                term *= -libm::expm1(-other.get() * z);
            }
        }
        total += term;
    }
    Ok(total)
}

/// Distribution function of `max_e X_e`: `Π_e (1 - exp(-λ_e z))`.
pub fn max_exp_cdf(rates: &[Rate], z: f64) -> Result<f64> {
    if rates.is_empty() {
        return Err(Error::Empty("rates"));
    }
    check_support("z", z)?;
    Ok(rates
        .iter()
        .map(|r| -libm::expm1(-r.get() * z))
        .product())
}

/// Fails with [`Error::DegenerateRates`] when two rates agree within the
/// relative tolerance `rel_tol`.
pub fn ensure_distinct(rates: &[Rate], rel_tol: f64) -> Result<()> {
    for i in 0..rates.len() {
        for j in (i + 1)..rates.len() {
            let (a, b) = (rates[i].get(), rates[j].get());
            if (a - b).abs() <= rel_tol * a.max(b) {
                return Err(Error::DegenerateRates { first: i, second: j });
            }
        }
    }
    Ok(())
}

/// Density of `Σ_e X_e` for independent exponentials with pairwise
/// distinct rates (the hypoexponential distribution).
///
/// Rates closer than [`HYPOEXP_RATE_TOLERANCE`] are rejected: the
/// partial-fraction form divides by their differences.
pub fn hypoexp_pdf(rates: &[Rate], w: f64) -> Result<f64> {
    if rates.is_empty() {
        return Err(Error::Empty("rates"));
    }
    check_support("w", w)?;
    ensure_distinct(rates, HYPOEXP_RATE_TOLERANCE)?;
    let scale: f64 = rates.iter().map(|r| r.get()).product();
    let mut total = 0.0;
    for (e, rate) in rates.iter().enumerate() {
        let lambda = rate.get();
        let denom: f64 = rates
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, other)| other.get() - lambda)
            .product();
        total += libm::exp(-lambda * w) / denom;
    }
    Ok((scale * total).max(0.0))
}
