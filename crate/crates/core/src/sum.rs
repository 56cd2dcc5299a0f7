//! Deterministic summation primitives.
//!
//! Two kinds of accumulators are used throughout the crate:
//!
//! * [`KahanSum`] plus the chunked pairwise reduction in [`det_sum`] for
//!   float-weighted aggregation.  Chunk boundaries are fixed by index, so a
//!   sum computed with any number of workers reduces the same values in the
//!   same order and produces bit-identical output.
//! * [`LogSum`], a fixed-point integer accumulator for sums of prime
//!   logarithms with integer weights.  Integer addition is associative, so
//!   these sums are exact and trivially order-independent; identities such
//!   as window additivity hold exactly instead of only up to rounding.

/// Compensated (Kahan) floating-point accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }

    pub fn sum_iter(iter: impl IntoIterator<Item = f64>) -> f64 {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc.value()
    }
}

/// Fixed chunk length for deterministic reductions.  Chosen once; changing it
/// changes every aggregated float in reports, so treat it as part of the
/// output format.
pub const SUM_CHUNK: usize = 2048;

/// Combine per-chunk partial sums with a pairwise tree in chunk order.
fn pairwise(parts: &[f64]) -> f64 {
    match parts.len() {
        0 => 0.0,
        1 => parts[0],
        n => {
            let mid = n / 2;
            pairwise(&parts[..mid]) + pairwise(&parts[mid..])
        }
    }
}

/// Deterministic sum of `f(0) + f(1) + ... + f(n-1)`.
///
/// Terms are grouped into fixed chunks of [`SUM_CHUNK`]; each chunk is summed
/// sequentially with Kahan compensation and the chunk totals are combined
/// pairwise in index order.  The result depends only on `n` and `f`, never on
/// how chunks were scheduled across workers.
pub fn det_sum(
    pool: &crate::parallel::Pool,
    n: usize,
    f: impl Fn(usize) -> f64 + Sync + Send,
) -> f64 {
    let chunks: Vec<f64> = pool.map_chunks(n, SUM_CHUNK, |lo, hi| {
        let mut acc = KahanSum::new();
        for i in lo..hi {
            acc.add(f(i));
        }
        acc.value()
    });
    pairwise(&chunks)
}

/// Binary scale of the fixed-point log representation.
pub const LOG_SCALE_BITS: u32 = 42;

/// Scale factor `2^42` as a float.
pub const LOG_SCALE: f64 = (1u64 << LOG_SCALE_BITS) as f64;

/// Round a natural logarithm to the fixed-point grid.
pub fn log_to_fixed(log: f64) -> i64 {
    (log * LOG_SCALE).round() as i64
}

/// Exact accumulator for integer-weighted sums of fixed-point logarithms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct LogSum(pub i128);

impl LogSum {
    pub const ZERO: LogSum = LogSum(0);

    pub fn add_fixed(&mut self, log_fixed: i64) {
        self.0 += log_fixed as i128;
    }

    pub fn add_weighted(&mut self, log_fixed: i64, weight: u64) {
        self.0 += log_fixed as i128 * weight as i128;
    }

    pub fn add(&mut self, other: LogSum) {
        self.0 += other.0;
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / LOG_SCALE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1e16);
        for _ in 0..10_000 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 10_000.0);
    }

    #[test]
    fn det_sum_matches_sequential_on_smooth_data() {
        let pool = crate::parallel::Pool::new(1);
        let n = 100_000;
        let f = |i: usize| 1.0 / (i as f64 + 1.0);
        let got = det_sum(&pool, n, f);
        let want = KahanSum::sum_iter((0..n).map(f));
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn det_sum_independent_of_worker_count() {
        let n = 3 * SUM_CHUNK + 17;
        let f = |i: usize| ((i * 2654435761) % 1000) as f64 * 1e-3;
        let one = det_sum(&crate::parallel::Pool::new(1), n, f);
        let many = det_sum(&crate::parallel::Pool::new(8), n, f);
        assert_eq!(one.to_bits(), many.to_bits());
    }

    #[test]
    fn log_sum_additivity_is_exact() {
        let logs: Vec<i64> = (2..500).map(|k| log_to_fixed((k as f64).ln())).collect();
        let mut all = LogSum::ZERO;
        for &l in &logs {
            all.add_fixed(l);
        }
        let (a, b) = logs.split_at(137);
        let mut left = LogSum::ZERO;
        let mut right = LogSum::ZERO;
        for &l in a {
            left.add_fixed(l);
        }
        for &l in b {
            right.add_fixed(l);
        }
        left.add(right);
        assert_eq!(all, left);
    }

    #[test]
    fn fixed_point_log_keeps_relative_accuracy() {
        for p in [2u64, 3, 97, 99_991, 4_294_967_291] {
            let exact = (p as f64).ln();
            let stored = log_to_fixed(exact) as f64 / LOG_SCALE;
            assert!((stored - exact).abs() / exact < 1e-12);
        }
    }
}
