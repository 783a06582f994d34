//! Outage probability: the chance that no transmit power satisfies the BEP
//! thresholds for a given fading realization.
//!
//! With unit-mean exponential power gains, `Y = (Q⁻¹(t2))² α_B² |h_B|²` is
//! exponential with rate `λ_y` and each `(Q⁻¹(t1))² α_e² |h_e|²` exponential
//! with rate `λ_e`. Outage is `P(Z > Y)` where `Z` combines the adversary
//! variables (maximum for passive and unknown-mode adversaries, sum for MRC).

use alloc::vec::Vec;

use crate::allocation::{load_admissible, AdversaryModel, Combiner, Thresholds};
use crate::channel::{FadingScenario, RandomStream};
use crate::error::Error;
use crate::montecarlo::{Bernoulli, BatchRunner, EventCount, Sequential};
use crate::special_math::{ensure_distinct, Rate};
use crate::Result;

/// Largest adversary count accepted by the inclusion-exclusion sum.
pub const MAX_INCLUSION_EXCLUSION: usize = 20;

/// Relative rate gap below which the MRC partial-fraction form is refused.
pub const MRC_RATE_GAP: f64 = 1e-6;

/// Rates of the legitimate and adversary exponential variables.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageRates {
    /// `λ_y`.
    pub legit: Rate,
    /// `λ_e`, one per adversary.
    pub adversaries: Vec<Rate>,
}

impl OutageRates {
    /// Rates for passive (and MRC) adversaries:
    /// `λ_y = 1/((Q⁻¹(t2))² α_B²)`, `λ_e = 1/((Q⁻¹(t1))² α_e²)`.
    pub fn passive(scenario: &FadingScenario, th: &Thresholds) -> Result<Self> {
        Self::build(scenario, th, 1.0, 1.0)
    }

    /// Rates for adversaries of unknown mode:
    /// `λ_y = 1/(σ² (Q⁻¹(t2))² α_B²)`, `λ_e = 1/((σ² + I)(Q⁻¹(t1))² α_e²)`.
    pub fn unknown_mode(scenario: &FadingScenario, th: &Thresholds) -> Result<Self> {
        let s2 = scenario.sigma2();
        Self::build(scenario, th, s2, s2 + scenario.interference())
    }

    fn build(
        scenario: &FadingScenario,
        th: &Thresholds,
        legit_noise: f64,
        adversary_noise: f64,
    ) -> Result<Self> {
        let f = th.factors();
        let ab2 = scenario.alpha_b() * scenario.alpha_b();
        let legit = Rate::of_scaled_unit_exponential(legit_noise * f.q2_sq * ab2)?;
        let adversaries = scenario
            .alpha_e()
            .iter()
            .map(|a| Rate::of_scaled_unit_exponential(adversary_noise * f.q1_sq * a * a))
            .collect::<Result<Vec<_>>>()?;
        Ok(OutageRates { legit, adversaries })
    }
}

fn require_single(scenario: &FadingScenario) -> Result<()> {
    if scenario.adversaries() == 1 {
        Ok(())
    } else {
        Err(Error::Misuse("single-adversary outage needs exactly one adversary"))
    }
}

/// Single adversary:
/// `α_E²(Q⁻¹(t1))² / (α_B²(Q⁻¹(t2))² + α_E²(Q⁻¹(t1))²)`.
pub fn outage_single_analytic(scenario: &FadingScenario, th: &Thresholds) -> Result<f64> {
    require_single(scenario)?;
    let f = th.factors();
    let ae = scenario.alpha_e()[0];
    let ab = scenario.alpha_b();
    let adversary = ae * ae * f.q1_sq;
    Ok(adversary / (ab * ab * f.q2_sq + adversary))
}

/// `P(max_e X_e > Y)` by inclusion-exclusion over the non-empty adversary
/// subsets `S`: `Σ_S (−1)^{|S|+1} λ_y / (λ_y + Σ_{e∈S} λ_e)`.
pub fn max_combining_outage(rates: &OutageRates) -> Result<f64> {
    let e = rates.adversaries.len();
    if e == 0 {
        return Err(Error::Empty("adversary rates"));
    }
    if e > MAX_INCLUSION_EXCLUSION {
        return Err(Error::TooManyAdversaries {
            count: e,
            max: MAX_INCLUSION_EXCLUSION,
        });
    }
    let ly = rates.legit.get();
    let mut total = 0.0;
    for mask in 1u32..(1u32 << e) {
        let subset_rate: f64 = rates
            .adversaries
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, r)| r.get())
            .sum();
        let term = ly / (subset_rate + ly);
        if mask.count_ones() % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// `P(Σ_e X_e > Y)` from the hypoexponential density:
/// `1 − (Π λ_e) Σ_e 1 / (Π_{i≠e}(λ_i − λ_e) (λ_e + λ_y))`.
///
/// Rates within [`MRC_RATE_GAP`] of each other are refused.
pub fn sum_combining_outage(rates: &OutageRates) -> Result<f64> {
    let lambdas = &rates.adversaries;
    if lambdas.is_empty() {
        return Err(Error::Empty("adversary rates"));
    }
    ensure_distinct(lambdas, MRC_RATE_GAP)?;
    let ly = rates.legit.get();
    let scale: f64 = lambdas.iter().map(|r| r.get()).product();
    let mut sum = 0.0;
    for (e, rate) in lambdas.iter().enumerate() {
        let le = rate.get();
        let denom: f64 = lambdas
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, r)| r.get() - le)
            .product();
        sum += 1.0 / (denom * (le + ly));
    }
    Ok((1.0 - scale * sum).clamp(0.0, 1.0))
}

/// Dedicated two-adversary MRC outage.
pub fn mrc_outage_two(l1: f64, l2: f64, ly: f64) -> f64 {
    1.0 - (l1 * l2 / (l2 - l1)) * (1.0 / (l1 + ly) - 1.0 / (l2 + ly))
}

/// Dedicated three-adversary MRC outage.
pub fn mrc_outage_three(l1: f64, l2: f64, l3: f64, ly: f64) -> f64 {
    1.0 - (l1 * l2 * l3)
        * (1.0 / ((l2 - l1) * (l3 - l1)) / (l1 + ly)
            + 1.0 / ((l1 - l2) * (l3 - l2)) / (l2 + ly)
            + 1.0 / ((l1 - l3) * (l2 - l3)) / (l3 + ly))
}

/// Outage against `E` passive adversaries.
pub fn outage_multi_analytic(scenario: &FadingScenario, th: &Thresholds) -> Result<f64> {
    max_combining_outage(&OutageRates::passive(scenario, th)?)
}

/// Outage against adversaries of unknown mode.
pub fn outage_unknown_mode_analytic(scenario: &FadingScenario, th: &Thresholds) -> Result<f64> {
    max_combining_outage(&OutageRates::unknown_mode(scenario, th)?)
}

/// Outage against MRC-cooperating adversaries. Nearly equal path losses give
/// [`Error::DegenerateRates`]; use Monte Carlo there.
pub fn outage_mrc_analytic(scenario: &FadingScenario, th: &Thresholds) -> Result<f64> {
    sum_combining_outage(&OutageRates::passive(scenario, th)?)
}

/// Analytic outage for an adversary model.
pub fn outage_analytic(
    scenario: &FadingScenario,
    th: &Thresholds,
    model: AdversaryModel,
) -> Result<f64> {
    match model {
        AdversaryModel::Passive => outage_multi_analytic(scenario, th),
        AdversaryModel::UnknownMode => outage_unknown_mode_analytic(scenario, th),
        AdversaryModel::Cooperative => outage_mrc_analytic(scenario, th),
    }
}

/// Analytic value and/or Monte Carlo estimate of an outage probability.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OutageResult {
    /// Closed-form value, absent when the closed form is unavailable.
    pub analytic: Option<f64>,
    /// Monte Carlo counts, absent when no trials were run.
    pub monte_carlo: Option<EventCount>,
}

impl OutageResult {
    /// Monte Carlo relative frequency.
    pub fn mc_estimate(&self) -> Option<f64> {
        self.monte_carlo.map(|c| c.estimate())
    }

    /// 95% confidence half-width `1.96 √(p̂(1 − p̂)/n)`.
    pub fn mc_halfwidth(&self) -> Option<f64> {
        self.monte_carlo.map(|c| c.halfwidth95())
    }

    /// Number of Monte Carlo trials.
    pub fn trials(&self) -> u64 {
        self.monte_carlo.map_or(0, |c| c.trials)
    }

    /// Best available value: analytic if present, else the MC estimate.
    pub fn value(&self) -> Option<f64> {
        self.analytic.or_else(|| self.mc_estimate())
    }

    /// Whether `|analytic − mc| ≤ k · halfwidth`. `None` unless both exist.
    pub fn agrees_within(&self, k: f64) -> Option<bool> {
        match (self.analytic, self.monte_carlo) {
            (Some(a), Some(c)) => Some((a - c.estimate()).abs() <= k * c.halfwidth95()),
            _ => None,
        }
    }
}

/// Monte Carlo estimate of the outage event for a single-antenna scenario.
///
/// Each trial draws the legitimate and adversary coefficients as `CN(0, 1)`,
/// forms the model's combined adversary gain and tests feasibility of the
/// allocation problem.
pub fn outage_monte_carlo(
    scenario: &FadingScenario,
    th: &Thresholds,
    model: AdversaryModel,
    trials: u64,
    stream: &RandomStream,
) -> Result<OutageResult> {
    outage_monte_carlo_with(&Sequential, scenario, th, model, trials, stream)
}

/// [`outage_monte_carlo`] on a caller-supplied batch runner.
pub fn outage_monte_carlo_with<R: BatchRunner>(
    runner: &R,
    scenario: &FadingScenario,
    th: &Thresholds,
    model: AdversaryModel,
    trials: u64,
    stream: &RandomStream,
) -> Result<OutageResult> {
    scenario.require_single_antenna()?;
    if trials == 0 {
        return Err(Error::Misuse("Monte Carlo needs at least one trial"));
    }
    let factors = th.factors();
    let noise = model.legit_noise_factor(scenario);
    let ab2 = scenario.alpha_b() * scenario.alpha_b();
    let ae2: Vec<f64> = scenario.alpha_e().iter().map(|a| a * a).collect();
    let combiner = model.combiner();
    let experiment = Bernoulli(|s: &mut RandomStream| {
        let legit = ab2 * s.complex_gaussian().norm_sqr();
        let mut load = 0.0_f64;
        for &a2 in &ae2 {
            let g = a2 * s.complex_gaussian().norm_sqr();
            load = match combiner {
                Combiner::Max => load.max(g),
                Combiner::Sum => load + g,
            };
        }
        !load_admissible(&factors, noise, legit, load)
    });
    let count = runner.run(&experiment, stream, trials);
    Ok(OutageResult {
        analytic: None,
        monte_carlo: Some(count),
    })
}

/// Analytic outage where a closed form is available, plus a Monte Carlo
/// estimate when `trials > 0`. Degenerate MRC rates leave `analytic` empty;
/// with `trials == 0` that case is reported as an error.
pub fn evaluate_outage<R: BatchRunner>(
    runner: &R,
    scenario: &FadingScenario,
    th: &Thresholds,
    model: AdversaryModel,
    trials: u64,
    stream: &RandomStream,
) -> Result<OutageResult> {
    let analytic = match outage_analytic(scenario, th, model) {
        Ok(p) => Some(p),
        Err(Error::DegenerateRates { .. }) if trials > 0 => None,
        Err(e) => return Err(e),
    };
    let monte_carlo = if trials > 0 {
        outage_monte_carlo_with(runner, scenario, th, model, trials, stream)?.monte_carlo
    } else {
        None
    };
    Ok(OutageResult {
        analytic,
        monte_carlo,
    })
}
