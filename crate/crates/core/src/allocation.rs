//! Minimum-power allocation under BEP thresholds, plus the secrecy-rate
//! baseline it is compared against.
//!
//! For BPSK the legitimate constraint `Q(√(a P / σ²)) ≤ t1` is a lower bound
//! on `P` and every adversary constraint `Q(√(b P / σ²)) ≥ t2` is an upper
//! bound, so the optimum is the lower bound whenever the interval is
//! non-empty. The adversary models differ only in how adversary gains enter
//! the upper bound.

use alloc::vec::Vec;

use crate::channel::{ChannelDraw, FadingScenario};
use crate::error::{domain, Error};
use crate::modulation::{bep_bpsk, bep_chernoff_bpsk, bep_qpsk};
use crate::special_math::q_inv;
use crate::Result;

/// BEP ceiling `t1` for the legitimate receiver and floor `t2` for adversaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    t1: f64,
    t2: f64,
}

impl Thresholds {
    /// Both thresholds must lie in `(0, 1/2)`, where `Q⁻¹` is positive.
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        for (what, t) in [("t1", t1), ("t2", t2)] {
            if !(t > 0.0 && t < 0.5) {
                return Err(domain(what, t));
            }
        }
        Ok(Thresholds { t1, t2 })
    }

    /// Legitimate BEP ceiling.
    pub fn t1(&self) -> f64 {
        self.t1
    }

    /// Adversary BEP floor.
    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Squared inverse-Q values used by every closed form.
    pub fn factors(&self) -> ThresholdFactors {
        let q1 = q_inv(self.t1).expect("validated threshold");
        let q2 = q_inv(self.t2).expect("validated threshold");
        ThresholdFactors {
            q1_sq: q1 * q1,
            q2_sq: q2 * q2,
        }
    }
}

/// `(Q⁻¹(t1))²` and `(Q⁻¹(t2))²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdFactors {
    /// `(Q⁻¹(t1))²`: SNR the legitimate receiver needs.
    pub q1_sq: f64,
    /// `(Q⁻¹(t2))²`: SNR no adversary may reach.
    pub q2_sq: f64,
}

/// How adversaries exploit what they receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdversaryModel {
    /// Independent passive eavesdroppers; each must stay above `t2`.
    Passive,
    /// Modes unknown: the strongest adversary listens, the rest jam the
    /// legitimate receiver with interference power `I`.
    UnknownMode,
    /// Adversaries pool their observations with maximum ratio combining.
    Cooperative,
}

/// How adversary gains are aggregated into the eavesdropping constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combiner {
    /// Strongest adversary.
    Max,
    /// Sum of gains (MRC).
    Sum,
}

impl AdversaryModel {
    /// Aggregation rule of this model.
    pub fn combiner(self) -> Combiner {
        match self {
            AdversaryModel::Passive | AdversaryModel::UnknownMode => Combiner::Max,
            AdversaryModel::Cooperative => Combiner::Sum,
        }
    }

    /// Factor `(σ² + I)/σ²` on the legitimate receiver's noise floor (1
    /// unless the modes are unknown).
    pub fn legit_noise_factor(self, scenario: &FadingScenario) -> f64 {
        match self {
            AdversaryModel::UnknownMode => 1.0 + scenario.interference() / scenario.sigma2(),
            _ => 1.0,
        }
    }
}

/// A constraint of an allocation problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Legitimate BEP ceiling.
    Legitimate,
    /// BEP floor of one adversary.
    Adversary(usize),
    /// BEP floor of the MRC-combined adversary signal.
    CombinedAdversaries,
    /// Minimum secrecy rate.
    SecrecyRate,
}

/// Outcome of an allocation problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AllocationResult {
    /// The problem has a solution.
    Feasible {
        /// Minimum transmit power.
        power: f64,
        /// Constraint that fixes the power.
        binding: Constraint,
    },
    /// No transmit power meets every constraint.
    Infeasible {
        /// A constraint that cannot be met together with the others.
        blocking: Constraint,
    },
}

impl AllocationResult {
    /// Whether a feasible power exists.
    pub fn is_feasible(&self) -> bool {
        matches!(self, AllocationResult::Feasible { .. })
    }

    /// Optimal power, if feasible.
    pub fn power(&self) -> Option<f64> {
        match *self {
            AllocationResult::Feasible { power, .. } => Some(power),
            AllocationResult::Infeasible { .. } => None,
        }
    }
}

/// Effective gains `a = α_B²|h_B|²` and `b_e = α_e²|h_e|²` of a
/// single-antenna draw.
fn scalar_gains(draw: &ChannelDraw, scenario: &FadingScenario) -> Result<(f64, Vec<f64>)> {
    scenario.require_single_antenna()?;
    Ok((draw.legit_gain(scenario), draw.adversary_gains(scenario)?))
}

fn require_single_adversary(scenario: &FadingScenario) -> Result<()> {
    if scenario.adversaries() == 1 {
        Ok(())
    } else {
        Err(Error::Misuse("operation requires exactly one adversary"))
    }
}

/// Index and value of the largest gain.
fn strongest(gains: &[f64]) -> (usize, f64) {
    gains
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, g)| if g > best.1 { (i, g) } else { best })
}

/// Feasibility test shared by the allocators and by the Monte Carlo outage
/// estimator: `Ok(())` when the threshold pair is satisfiable, otherwise the
/// constraint that blocks it.
pub fn feasibility(
    model: AdversaryModel,
    factors: &ThresholdFactors,
    legit_noise_factor: f64,
    legit_gain: f64,
    adversary_gains: &[f64],
) -> core::result::Result<(), Constraint> {
    let (load, blocking) = match model.combiner() {
        Combiner::Max => {
            let (i, g) = strongest(adversary_gains);
            (g, Constraint::Adversary(i))
        }
        Combiner::Sum => (adversary_gains.iter().sum(), Constraint::CombinedAdversaries),
    };
    if load_admissible(factors, legit_noise_factor, legit_gain, load) {
        Ok(())
    } else {
        Err(blocking)
    }
}

/// Core inequality `κ (Q⁻¹(t1))² · load ≤ (Q⁻¹(t2))² · a`, where `load` is
/// the combined adversary gain and `κ` the legitimate noise factor.
/// Equality counts as feasible.
#[inline]
pub fn load_admissible(
    factors: &ThresholdFactors,
    legit_noise_factor: f64,
    legit_gain: f64,
    load: f64,
) -> bool {
    legit_noise_factor * factors.q1_sq * load <= factors.q2_sq * legit_gain
}

fn bep_allocation(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
    model: AdversaryModel,
) -> Result<AllocationResult> {
    let (a, b) = scalar_gains(draw, scenario)?;
    let factors = th.factors();
    let noise = model.legit_noise_factor(scenario);
    Ok(match feasibility(model, &factors, noise, a, &b) {
        Ok(()) => AllocationResult::Feasible {
            power: noise * scenario.sigma2() * factors.q1_sq / a,
            binding: Constraint::Legitimate,
        },
        Err(blocking) => AllocationResult::Infeasible { blocking },
    })
}

/// BPSK, one adversary: `P = σ²(Q⁻¹(t1))² / a` when
/// `b (Q⁻¹(t1))² ≤ a (Q⁻¹(t2))²`.
pub fn allocate_bpsk_single(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
) -> Result<AllocationResult> {
    require_single_adversary(scenario)?;
    bep_allocation(draw, scenario, th, AdversaryModel::Passive)
}

/// BPSK, `E` passive adversaries. The power is the single-adversary one;
/// only feasibility depends on the strongest adversary.
pub fn allocate_multi_eve(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
) -> Result<AllocationResult> {
    bep_allocation(draw, scenario, th, AdversaryModel::Passive)
}

/// BPSK with adversaries of unknown mode: the legitimate noise floor grows to
/// `σ² + I` while the strongest adversary listens interference-free.
pub fn allocate_unknown_mode(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
) -> Result<AllocationResult> {
    bep_allocation(draw, scenario, th, AdversaryModel::UnknownMode)
}

/// BPSK against MRC-cooperating adversaries: feasibility uses the summed
/// adversary gain.
pub fn allocate_mrc(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
) -> Result<AllocationResult> {
    bep_allocation(draw, scenario, th, AdversaryModel::Cooperative)
}

/// Allocator for the given adversary model.
pub fn allocate(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
    model: AdversaryModel,
) -> Result<AllocationResult> {
    bep_allocation(draw, scenario, th, model)
}

/// How far the exact QPSK constraints are from binding at a power chosen
/// with the approximate model. Non-negative slack means the exact constraint
/// holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpskExactSlack {
    /// `t1 − BEP_B,exact`.
    pub legitimate: f64,
    /// `BEP_E,exact − t2`.
    pub adversary: f64,
}

/// QPSK allocation together with the exact-model slack at its power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpskAllocation {
    /// Solution of the approximated problem.
    pub allocation: AllocationResult,
    /// Exact-model slack, present when feasible.
    pub exact_slack: Option<QpskExactSlack>,
}

/// QPSK, one adversary, solved on the approximation `BEP ≈ Q(√(snr/2))`:
/// `P = 2σ²(Q⁻¹(t1))² / a`.
pub fn allocate_qpsk_single(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
) -> Result<QpskAllocation> {
    require_single_adversary(scenario)?;
    let (a, b) = scalar_gains(draw, scenario)?;
    let factors = th.factors();
    let allocation = match feasibility(AdversaryModel::Passive, &factors, 1.0, a, &b) {
        Ok(()) => AllocationResult::Feasible {
            power: 2.0 * scenario.sigma2() * factors.q1_sq / a,
            binding: Constraint::Legitimate,
        },
        Err(blocking) => AllocationResult::Infeasible { blocking },
    };
    let exact_slack = match allocation.power() {
        Some(p) => {
            let s2 = scenario.sigma2();
            Some(QpskExactSlack {
                legitimate: th.t1 - bep_qpsk(a * p / s2, false)?,
                adversary: bep_qpsk(b[0] * p / s2, false)? - th.t2,
            })
        }
        None => None,
    };
    Ok(QpskAllocation {
        allocation,
        exact_slack,
    })
}

/// BPSK, one adversary, with `Q` replaced by its Chernoff bound:
/// `P = −2σ² ln(2 t1) / a` when `b ln(2 t1) ≥ a ln(2 t2)`.
pub fn allocate_chernoff(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    th: &Thresholds,
) -> Result<AllocationResult> {
    require_single_adversary(scenario)?;
    let (a, b) = scalar_gains(draw, scenario)?;
    let need_b = -libm::log(2.0 * th.t1);
    let limit_e = -libm::log(2.0 * th.t2);
    Ok(if b[0] * need_b <= a * limit_e {
        AllocationResult::Feasible {
            power: 2.0 * scenario.sigma2() * need_b / a,
            binding: Constraint::Legitimate,
        }
    } else {
        AllocationResult::Infeasible {
            blocking: Constraint::Adversary(0),
        }
    })
}

/// Secrecy rate `[log₂(1+SNR_B) − log₂(1+SNR_E)]⁺` against the strongest
/// adversary.
pub fn secrecy_rate(draw: &ChannelDraw, scenario: &FadingScenario, power: f64) -> Result<f64> {
    if !(power >= 0.0) {
        return Err(domain("power", power));
    }
    let (a, b) = scalar_gains(draw, scenario)?;
    let (_, b) = strongest(&b);
    let s2 = scenario.sigma2();
    let rate = libm::log2(1.0 + a * power / s2) - libm::log2(1.0 + b * power / s2);
    Ok(rate.max(0.0))
}

/// High-power limit of [`secrecy_rate`]: `log₂(a / b)` when `a ≥ b`, else 0.
pub fn secrecy_rate_limit(draw: &ChannelDraw, scenario: &FadingScenario) -> Result<f64> {
    let (a, b) = scalar_gains(draw, scenario)?;
    let (_, b) = strongest(&b);
    Ok(if a >= b { libm::log2(a / b) } else { 0.0 })
}

/// Minimum power reaching secrecy rate `r_min`.
///
/// With SNR slopes `a' = a/σ²`, `b' = b/σ²` and `k = 2^r_min`, the constraint
/// `(1 + a'P)/(1 + b'P) ≥ k` holds iff `P (a' − k b') ≥ k − 1`, so the problem
/// is feasible iff `a' > k b'` and then `P = (k − 1)/(a' − k b')`.
pub fn allocate_secrecy_baseline(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    r_min: f64,
) -> Result<AllocationResult> {
    if !(r_min > 0.0 && r_min.is_finite()) {
        return Err(domain("r_min", r_min));
    }
    let (a, b) = scalar_gains(draw, scenario)?;
    let (_, b) = strongest(&b);
    let s2 = scenario.sigma2();
    let (a, b) = (a / s2, b / s2);
    let k = libm::exp2(r_min);
    if a > k * b {
        Ok(AllocationResult::Feasible {
            power: libm::expm1(r_min * core::f64::consts::LN_2) / (a - k * b),
            binding: Constraint::SecrecyRate,
        })
    } else {
        Ok(AllocationResult::Infeasible {
            blocking: Constraint::SecrecyRate,
        })
    }
}

/// Modulation used to re-evaluate a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BepKind {
    /// Exact BPSK `Q(√snr)`.
    Bpsk,
    /// Approximated QPSK `Q(√(snr/2))`.
    QpskApprox,
    /// Chernoff-bounded BPSK.
    Chernoff,
}

impl BepKind {
    fn eval(self, snr: f64) -> Result<f64> {
        match self {
            BepKind::Bpsk => bep_bpsk(snr),
            BepKind::QpskApprox => bep_qpsk(snr, true),
            BepKind::Chernoff => bep_chernoff_bpsk(snr),
        }
    }
}

/// Error probabilities seen at a given transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBeps {
    /// Legitimate receiver's BEP.
    pub legitimate: f64,
    /// BEP of each modeled adversary: one entry per adversary for the
    /// passive model, the strongest adversary for the unknown-mode model and
    /// the combined signal for the cooperative model.
    pub adversaries: Vec<f64>,
}

impl ReceivedBeps {
    /// Whether `legitimate ≤ t1 + tol` and every adversary BEP `≥ t2 − tol`.
    pub fn satisfies(&self, th: &Thresholds, tol: f64) -> bool {
        self.legitimate <= th.t1 + tol && self.adversaries.iter().all(|&p| p >= th.t2 - tol)
    }
}

/// Re-evaluates the BEP of every receiver under an adversary model.
pub fn received_beps(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    model: AdversaryModel,
    kind: BepKind,
    power: f64,
) -> Result<ReceivedBeps> {
    if !(power >= 0.0) {
        return Err(domain("power", power));
    }
    let (a, b) = scalar_gains(draw, scenario)?;
    let s2 = scenario.sigma2();
    let legitimate = kind.eval(a * power / (s2 * model.legit_noise_factor(scenario)))?;
    let adversaries = match model {
        AdversaryModel::Passive => b
            .iter()
            .map(|&g| kind.eval(g * power / s2))
            .collect::<Result<Vec<_>>>()?,
        AdversaryModel::UnknownMode => alloc::vec![kind.eval(strongest(&b).1 * power / s2)?],
        AdversaryModel::Cooperative => {
            alloc::vec![kind.eval(b.iter().sum::<f64>() * power / s2)?]
        }
    };
    Ok(ReceivedBeps {
        legitimate,
        adversaries,
    })
}
