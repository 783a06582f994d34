//! Batch-structured Monte Carlo engine.
//!
//! Trials are cut into fixed-size batches; batch `i` always draws from
//! sub-stream `i` of the root stream, and batch results are merged in batch
//! order. Any executor that honours those two rules produces bit-identical
//! results, whatever its worker count.

use crate::channel::RandomStream;

/// Trials per batch.
pub const BATCH_TRIALS: u64 = 1 << 14;

/// Mergeable per-batch summary.
pub trait Accumulator: Default + Send {
    /// Folds `other` (the next batch in order) into `self`.
    fn merge(&mut self, other: Self);
}

/// A randomized trial that records into an accumulator.
pub trait Experiment: Sync {
    /// Summary type.
    type Acc: Accumulator;

    /// Runs one trial.
    fn trial(&self, stream: &mut RandomStream, acc: &mut Self::Acc);
}

/// Number of successes out of a number of Bernoulli trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EventCount {
    /// Trials in which the event occurred.
    pub events: u64,
    /// Trials run.
    pub trials: u64,
}

impl Accumulator for EventCount {
    fn merge(&mut self, other: Self) {
        self.events += other.events;
        self.trials += other.trials;
    }
}

impl EventCount {
    /// Relative frequency of the event.
    pub fn estimate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.events as f64 / self.trials as f64
        }
    }

    /// Standard error `√(p̂(1 − p̂)/n)`.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return f64::INFINITY;
        }
        let p = self.estimate();
        libm::sqrt(p * (1.0 - p) / self.trials as f64)
    }

    /// Normal-approximation 95% confidence half-width.
    pub fn halfwidth95(&self) -> f64 {
        1.96 * self.std_error()
    }
}

/// Adapts a predicate into an [`Experiment`] counting `true` outcomes.
pub struct Bernoulli<F>(pub F);

impl<F> Experiment for Bernoulli<F>
where
    F: Fn(&mut RandomStream) -> bool + Sync,
{
    type Acc = EventCount;

    #[inline]
    fn trial(&self, stream: &mut RandomStream, acc: &mut EventCount) {
        acc.trials += 1;
        if (self.0)(stream) {
            acc.events += 1;
        }
    }
}

/// Number of batches covering `trials`.
pub fn batch_count(trials: u64) -> u64 {
    trials.div_ceil(BATCH_TRIALS)
}

/// Runs batch `batch` of a `trials`-trial experiment.
pub fn run_batch<E: Experiment + ?Sized>(
    experiment: &E,
    root: &RandomStream,
    trials: u64,
    batch: u64,
) -> E::Acc {
    let start = batch * BATCH_TRIALS;
    let len = trials.saturating_sub(start).min(BATCH_TRIALS);
    let mut stream = root.substream(batch);
    let mut acc = E::Acc::default();
    for _ in 0..len {
        experiment.trial(&mut stream, &mut acc);
    }
    acc
}

/// Strategy for executing the batches of an experiment.
pub trait BatchRunner {
    /// Runs `trials` trials and merges batch summaries in batch order.
    fn run<E: Experiment + ?Sized>(&self, experiment: &E, root: &RandomStream, trials: u64)
        -> E::Acc;
}

/// Runs every batch on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl BatchRunner for Sequential {
    fn run<E: Experiment + ?Sized>(
        &self,
        experiment: &E,
        root: &RandomStream,
        trials: u64,
    ) -> E::Acc {
        let mut total = E::Acc::default();
        for batch in 0..batch_count(trials) {
            total.merge(run_batch(experiment, root, trials, batch));
        }
        total
    }
}
