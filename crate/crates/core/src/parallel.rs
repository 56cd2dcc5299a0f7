//! Worker-pool plumbing.
//!
//! The CLI owns the worker count and hands library code a [`Pool`]; library
//! code only ever asks for "map these index ranges".  Results come back in
//! index order, so any reduction the caller performs is independent of
//! scheduling and worker count.

use rayon::prelude::*;

/// A bounded worker pool.  `Pool::new(1)` runs everything inline, which is
/// also the fallback when thread spawning is unavailable.
pub struct Pool {
    inner: Option<rayon::ThreadPool>,
    workers: usize,
}

impl Pool {
    pub fn new(workers: usize) -> Pool {
        let workers = workers.max(1);
        let inner = if workers == 1 {
            None
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .ok()
        };
        Pool { inner, workers }
    }

    /// Pool sized to the machine.
    pub fn default_for_host() -> Pool {
        let n = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        Pool::new(n)
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Evaluate `f` on each index in `0..n`, collecting results in index
    /// order.
    pub fn map_indexed<T: Send>(&self, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        match &self.inner {
            None => (0..n).map(f).collect(),
            Some(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
        }
    }

    /// Split `0..n` into fixed chunks of length `chunk` and evaluate
    /// `f(lo, hi)` on each; results come back in chunk order.  Chunk
    /// boundaries depend only on `n` and `chunk`, never on the worker count,
    /// which is what makes downstream aggregation reproducible.
    pub fn map_chunks<T: Send>(
        &self,
        n: usize,
        chunk: usize,
        f: impl Fn(usize, usize) -> T + Sync + Send,
    ) -> Vec<T> {
        let chunk = chunk.max(1);
        let count = n.div_ceil(chunk);
        let run = |c: usize| {
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(n);
            f(lo, hi)
        };
        match &self.inner {
            None => (0..count).map(run).collect(),
            Some(pool) => pool.install(|| (0..count).into_par_iter().map(run).collect()),
        }
    }
}

impl Default for Pool {
    fn default() -> Self {
        Pool::default_for_host()
    }
}
