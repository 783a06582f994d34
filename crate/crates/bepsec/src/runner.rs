//! Multi-threaded batch runner.

use bepsec_core::channel::RandomStream;
use bepsec_core::montecarlo::{batch_count, run_batch, Accumulator, BatchRunner, Experiment};
use rayon::prelude::*;

/// Runs batches on a dedicated thread pool and merges them in batch order,
/// so the result matches [`bepsec_core::montecarlo::Sequential`] bit for bit.
pub struct Threaded {
    pool: rayon::ThreadPool,
}

impl Threaded {
    pub fn new(workers: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .expect("thread pool");
        Threaded { pool }
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl BatchRunner for Threaded {
    fn run<E: Experiment + ?Sized>(&self, experiment: &E, root: &RandomStream, trials: u64) -> E::Acc {
        let batches: Vec<E::Acc> = self.pool.install(|| {
            (0..batch_count(trials))
                .into_par_iter()
                .map(|b| run_batch(experiment, root, trials, b))
                .collect()
        });
        let mut total = E::Acc::default();
        for acc in batches {
            total.merge(acc);
        }
        total
    }
}
