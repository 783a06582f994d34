//! Bounded-distance block codes characterized by length `n` and correction
//! capability `t`, and the translation of block-level reliability targets
//! into raw bit-error thresholds for the allocator.
//!
//! Bit errors inside a block are i.i.d. given the channel realization, so a
//! block fails exactly when more than `t` of its `n` bits are in error.

use crate::allocation::{AdversaryModel, Thresholds};
use crate::channel::{FadingScenario, RandomStream};
use crate::error::{domain, Error};
use crate::montecarlo::{BatchRunner, Bernoulli, EventCount, Sequential};
use crate::outage::{evaluate_outage, OutageResult};
use crate::Result;

/// Default legitimate block-failure target.
pub const DEFAULT_BLOCK_FAIL_LEGIT: f64 = 0.01;
/// Default adversary block-success target.
pub const DEFAULT_BLOCK_SUCCESS_EVE: f64 = 0.01;

/// A block code plus the block-level reliability it must deliver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCodeParams {
    n: u32,
    t: u32,
    target_block_fail_legit: f64,
    target_block_success_eve: f64,
}

fn open_unit(what: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(domain(what, v))
    }
}

impl BlockCodeParams {
    /// Code of length `n` correcting `t < n/2` errors, with default targets.
    pub fn new(n: u32, t: u32) -> Result<Self> {
        if n == 0 {
            return Err(domain("n", 0.0));
        }
        if 2 * t >= n && !(n == 1 && t == 0) {
            return Err(domain("t", t as f64));
        }
        Ok(BlockCodeParams {
            n,
            t,
            target_block_fail_legit: DEFAULT_BLOCK_FAIL_LEGIT,
            target_block_success_eve: DEFAULT_BLOCK_SUCCESS_EVE,
        })
    }

    /// Replaces the block-level targets.
    pub fn with_targets(mut self, block_fail_legit: f64, block_success_eve: f64) -> Result<Self> {
        self.target_block_fail_legit = open_unit("target_block_fail_legit", block_fail_legit)?;
        self.target_block_success_eve = open_unit("target_block_success_eve", block_success_eve)?;
        Ok(self)
    }

    /// Targets equivalent to raw-BEP thresholds `(t1, t2)` without coding:
    /// the legitimate block may fail as often as an uncoded `n`-bit frame at
    /// BEP `t1`, and adversaries may decode blocks as often as this code lets
    /// them at raw BEP `t2`.
    pub fn with_matched_targets(self, th: &Thresholds) -> Result<Self> {
        let legit = -libm::expm1(self.n as f64 * libm::log1p(-th.t1()));
        let eve = 1.0 - block_fail_prob(th.t2(), &self)?;
        self.with_targets(legit, eve)
    }

    /// Block length.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Correctable errors per block.
    pub fn t(&self) -> u32 {
        self.t
    }

    /// Largest tolerated legitimate block-failure probability.
    pub fn target_block_fail_legit(&self) -> f64 {
        self.target_block_fail_legit
    }

    /// Largest tolerated adversary block-success probability.
    pub fn target_block_success_eve(&self) -> f64 {
        self.target_block_success_eve
    }
}

fn ln_choose(n: u32, k: u32) -> f64 {
    let (n, k) = (n as f64, k as f64);
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// Probability that more than `t` of `n` bits are in error at raw BEP `p`.
///
/// Small tails are summed directly rather than as one minus the head, so no
/// cancellation occurs for small `p`.
pub fn block_fail_prob(p: f64, code: &BlockCodeParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", p));
    }
    let (n, t) = (code.n, code.t);
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(if t < n { 1.0 } else { 0.0 });
    }
    let (lp, lq) = (libm::log(p), libm::log1p(-p));
    let term = |i: u32| libm::exp(ln_choose(n, i) + i as f64 * lp + (n - i) as f64 * lq);
    // Sum whichever side is small so that neither side loses to cancellation.
    if p * (n as f64) <= t as f64 + 1.0 {
        let tail: f64 = ((t + 1)..=n).map(term).sum();
        Ok(tail.min(1.0))
    } else {
        let head: f64 = (0..=t).map(term).sum();
        Ok((1.0 - head).max(0.0))
    }
}

/// Bisection on the increasing map `p ↦ block_fail_prob(p)`: returns the
/// bracket `(lo, hi)` with `f(lo) < level ≤ f(hi)` narrowed to adjacent
/// doubles.
fn bisect_level(code: &BlockCodeParams, level: f64, inclusive_low: bool) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = block_fail_prob(mid, code).expect("mid in [0, 1]");
        let below = if inclusive_low { f <= level } else { f < level };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Raw BEP thresholds meeting the code's block-level targets: `t1` is the
/// largest BEP whose block-failure probability is at most the legitimate
/// target, `t2` the smallest BEP whose block-failure probability reaches one
/// minus the adversary success target.
pub fn effective_thresholds(code: &BlockCodeParams) -> Result<Thresholds> {
    if code.t >= code.n {
        return Err(Error::NoValidTransformation("code corrects every pattern"));
    }
    let (p1, _) = bisect_level(code, code.target_block_fail_legit, true);
    let (_, p2) = bisect_level(code, 1.0 - code.target_block_success_eve, false);
    if !(p1 < p2) {
        return Err(Error::NoValidTransformation(
            "legitimate raw BEP ceiling is not below the adversary floor",
        ));
    }
    if !(p1 > 0.0 && p2 < 0.5) {
        return Err(Error::NoValidTransformation("raw thresholds leave (0, 1/2)"));
    }
    Thresholds::new(p1, p2)
}

/// Whether the design rule `BEP_e·n ≫ t`, `BEP_B·n ≪ t` holds in the
/// quantified form `t2·n > 2t` and `t1·n < t/2`.
pub fn design_rule_holds(th: &Thresholds, code: &BlockCodeParams) -> bool {
    let n = code.n as f64;
    let t = code.t as f64;
    th.t2() * n > 2.0 * t && th.t1() * n < 0.5 * t
}

/// Outage with the thresholds replaced by [`effective_thresholds`].
pub fn coded_outage<R: BatchRunner>(
    runner: &R,
    scenario: &FadingScenario,
    code: &BlockCodeParams,
    model: AdversaryModel,
    trials: u64,
    stream: &RandomStream,
) -> Result<OutageResult> {
    let th = effective_thresholds(code)?;
    evaluate_outage(runner, scenario, &th, model, trials, stream)
}

/// Bit-flip simulation of `blocks` blocks at raw BEP `p`; counts blocks with
/// more than `t` errors.
pub fn block_fail_monte_carlo(
    p: f64,
    code: &BlockCodeParams,
    blocks: u64,
    stream: &RandomStream,
) -> Result<EventCount> {
    block_fail_monte_carlo_with(&Sequential, p, code, blocks, stream)
}

/// [`block_fail_monte_carlo`] on a caller-supplied batch runner.
pub fn block_fail_monte_carlo_with<R: BatchRunner>(
    runner: &R,
    p: f64,
    code: &BlockCodeParams,
    blocks: u64,
    stream: &RandomStream,
) -> Result<EventCount> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", p));
    }
    let threshold = RandomStream::bernoulli_threshold(p);
    let (n, t) = (code.n, code.t);
    let experiment = Bernoulli(|s: &mut RandomStream| {
        let mut errors = 0;
        for _ in 0..n {
            errors += (s.next_u64() < threshold) as u32;
        }
        errors > t
    });
    Ok(runner.run(&experiment, stream, blocks))
}
