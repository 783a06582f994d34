//! Multi-antenna transmitter sending data along the legitimate channel and
//! artificial noise (AN) inside its null space.
//!
//! Gains are measured as `|hᴴw|²` on path-loss-scaled channels `α h`. With
//! `w_d = h_B/‖h_B‖` and `h_Bᴴ w_an = 0` the legitimate receiver sees no AN,
//! while adversary `e` sees data gain `g_d = |h_eᴴ w_d|²` and AN gain
//! `g_an = |h_eᴴ w_an|²`. Minimizing `P_d + P_an` then becomes a two-variable
//! linear program whose optimum is available in closed form.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::allocation::Thresholds;
use crate::channel::{draw_channels, norm_sqr, ChannelDraw, FadingScenario, RandomStream};
use crate::error::Error;
use crate::montecarlo::{Bernoulli, BatchRunner, Sequential};
use crate::outage::OutageResult;
use crate::Result;

/// `aᴴ b`.
fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn scaled(v: &[Complex64], s: f64) -> Vec<Complex64> {
    v.iter().map(|x| x * s).collect()
}

fn normalized(v: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = libm::sqrt(norm_sqr(v));
    (n > 0.0 && n.is_finite()).then(|| scaled(v, 1.0 / n))
}

/// Removes the `u` component from `v` (`u` unit norm).
fn reject(v: &mut [Complex64], u: &[Complex64]) {
    let c = inner(u, v);
    for (x, y) in v.iter_mut().zip(u) {
        *x -= y * c;
    }
}

/// Data and artificial-noise beamforming vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformers {
    /// Unit-norm data beamformer with `h_Bᴴ w_d = ‖h_B‖`.
    pub w_d: Vec<Complex64>,
    /// Unit-norm AN beamformer with `h_Bᴴ w_an = 0`.
    pub w_an: Vec<Complex64>,
    /// Adversary whose channel projection sets `w_an`, if any.
    pub steered_at: Option<usize>,
}

/// Builds the beamformers for one realization.
///
/// `w_d` is the matched beam `h_b/‖h_b‖`. `w_an` is the normalized projection
/// onto the null space of `h_b` of the channel of the adversary with the
/// largest data leakage `|h_eᴴ w_d|²`; when that projection vanishes the
/// projection of the standard basis vector least aligned with `h_b` is used.
pub fn design_beamformers(h_b: &[Complex64], h_e: &[Vec<Complex64>]) -> Result<Beamformers> {
    if h_b.len() < 2 {
        return Err(Error::NoNullSpace);
    }
    let w_d = normalized(h_b).ok_or(Error::NoNullSpace)?;
    if h_e.iter().any(|h| h.len() != h_b.len()) {
        return Err(Error::Misuse("adversary channel length differs from antenna count"));
    }

    let target = h_e
        .iter()
        .enumerate()
        .map(|(e, h)| (e, inner(h, &w_d).norm_sqr()))
        .fold(None, |best: Option<(usize, f64)>, (e, g)| match best {
            Some((_, bg)) if bg >= g => best,
            _ => Some((e, g)),
        })
        .map(|(e, _)| e);

    let project = |v: &[Complex64]| -> Option<Vec<Complex64>> {
        let scale = libm::sqrt(norm_sqr(v));
        let mut p = v.to_vec();
        reject(&mut p, &w_d);
        if libm::sqrt(norm_sqr(&p)) <= 1e-12 * scale {
            return None;
        }
        let mut p = normalized(&p)?;
        // Second pass restores orthogonality lost to cancellation.
        reject(&mut p, &w_d);
        normalized(&p)
    };

    if let Some(e) = target {
        if let Some(w_an) = project(&h_e[e]) {
            return Ok(Beamformers {
                w_d,
                w_an,
                steered_at: Some(e),
            });
        }
    }
    let k = (0..h_b.len())
        .min_by(|&i, &j| h_b[i].norm_sqr().total_cmp(&h_b[j].norm_sqr()))
        .unwrap_or(0);
    let mut basis = alloc::vec![Complex64::new(0.0, 0.0); h_b.len()];
    basis[k] = Complex64::new(1.0, 0.0);
    let w_an = project(&basis).ok_or(Error::NoNullSpace)?;
    Ok(Beamformers {
        w_d,
        w_an,
        steered_at: None,
    })
}

/// Received gains under a pair of beamformers.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamGains {
    /// `‖α_B h_B‖²`, the legitimate data gain.
    pub legit: f64,
    /// AN power gain leaking to the legitimate receiver, `|α_B h_Bᴴ w_an|²`.
    pub legit_an: f64,
    /// Per adversary `|α_e h_eᴴ w_d|²`.
    pub data: Vec<f64>,
    /// Per adversary `|α_e h_eᴴ w_an|²`.
    pub noise: Vec<f64>,
}

/// Evaluates the gains of a draw under the given beamformers.
pub fn beam_gains(draw: &ChannelDraw, scenario: &FadingScenario, bf: &Beamformers) -> BeamGains {
    let ab2 = scenario.alpha_b() * scenario.alpha_b();
    let (data, noise) = draw
        .h_e
        .iter()
        .zip(scenario.alpha_e())
        .map(|(h, a)| {
            let a2 = a * a;
            (a2 * inner(h, &bf.w_d).norm_sqr(), a2 * inner(h, &bf.w_an).norm_sqr())
        })
        .unzip();
    BeamGains {
        legit: ab2 * inner(&draw.h_b, &bf.w_d).norm_sqr(),
        legit_an: ab2 * inner(&draw.h_b, &bf.w_an).norm_sqr(),
        data,
        noise,
    }
}

/// Optimal data and AN powers for one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution {
    /// Beamformers used.
    pub beams: Beamformers,
    /// Gains under those beamformers.
    pub gains: BeamGains,
    /// Data power.
    pub p_d: f64,
    /// Artificial-noise power.
    pub p_an: f64,
    /// Whether every constraint can be met.
    pub feasible: bool,
    /// Adversary whose constraint cannot be met, when infeasible.
    pub blocking: Option<usize>,
}

impl BeamformingSolution {
    /// Total transmit power `P_d + P_an`.
    pub fn total_power(&self) -> f64 {
        self.p_d + self.p_an
    }
}

/// Solves `min P_d + P_an` subject to
/// `σ²(Q⁻¹(t1))² ≤ ‖h_B‖² P_d` and, for every adversary,
/// `g_d P_d ≤ (Q⁻¹(t2))² (σ² + g_an P_an)`.
///
/// Each adversary constraint bounds `P_an` below by an increasing function of
/// `P_d`, so the optimum takes `P_d` at its lower bound and `P_an` at the
/// largest of those bounds (or zero).
pub fn solve_power_pair(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
) -> Result<BeamformingSolution> {
    if scenario.antennas() < 2 {
        return Err(Error::NoNullSpace);
    }
    if draw.h_b.len() != scenario.antennas() || draw.h_e.len() != scenario.adversaries() {
        return Err(Error::Misuse("draw does not match scenario"));
    }
    let beams = design_beamformers(&draw.h_b, &draw.h_e)?;
    let gains = beam_gains(draw, scenario, &beams);
    let f = th.factors();
    let s2 = scenario.sigma2();
    let p_d = s2 * f.q1_sq / gains.legit;
    let floor = f.q2_sq * s2;

    let mut p_an = 0.0_f64;
    let mut blocking = None;
    for (e, (&gd, &gan)) in gains.data.iter().zip(&gains.noise).enumerate() {
        let excess = gd * p_d - floor;
        if excess <= 0.0 {
            continue;
        }
        if gan > 0.0 {
            p_an = p_an.max(excess / (f.q2_sq * gan));
        } else if blocking.is_none() {
            blocking = Some(e);
        }
    }
    Ok(BeamformingSolution {
        beams,
        gains,
        p_d,
        p_an,
        feasible: blocking.is_none(),
        blocking,
    })
}

/// Fraction of realizations for which [`solve_power_pair`] is infeasible.
pub fn outage_beamforming_mc(
    scenario: &FadingScenario,
    th: &Thresholds,
    trials: u64,
    stream: &RandomStream,
) -> Result<OutageResult> {
    outage_beamforming_mc_with(&Sequential, scenario, th, trials, stream)
}

/// [`outage_beamforming_mc`] on a caller-supplied batch runner.
pub fn outage_beamforming_mc_with<R: BatchRunner>(
    runner: &R,
    scenario: &FadingScenario,
    th: &Thresholds,
    trials: u64,
    stream: &RandomStream,
) -> Result<OutageResult> {
    if scenario.antennas() < 2 {
        return Err(Error::NoNullSpace);
    }
    if trials == 0 {
        return Err(Error::Misuse("Monte Carlo needs at least one trial"));
    }
    let experiment = Bernoulli(|s: &mut RandomStream| {
        let draw = draw_channels(scenario, s);
        // A zero legitimate channel has probability zero; count it as outage.
        solve_power_pair(&draw, scenario, th).map_or(true, |sol| !sol.feasible)
    });
    Ok(OutageResult {
        analytic: None,
        monte_carlo: Some(runner.run(&experiment, stream, trials)),
    })
}
