//! Benchmark-only crate. The measurements live in `benches/`; this
//! library just hosts shared fixtures.

use stav_core::Pool;

/// Worker pool sized for benchmarking: benchmarks measure the kernels,
/// not the scheduler, so keep it at two workers everywhere.
pub fn bench_pool() -> Pool {
    Pool::new(2)
}
