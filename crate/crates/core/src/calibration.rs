//! Pinned parameters and tolerances for the built-in verification suites.
//!
//! Every bound the `checks` module applies is named here, so a verification
//! run is reproducible from the source alone.  Exact identities use zero
//! tolerance; floating-point aggregates get budgets derived from the
//! summation schemes; statistical checks get the slack that honest runs of
//! the sizes below need.

/// Class numbers from form counting and from truncated L-series must agree
/// exactly for every prime up to this bound (criterion: zero tolerance).
pub const CLASS_AGREEMENT_PRIME_LIMIT: u64 = 500;

/// Prime bound for matching isomorphism-class counts against class numbers
/// of trace discriminants, and for the count identities.
pub const CLASS_COUNT_PRIME_LIMIT: u64 = 150;

/// `|count(p, r) - (p-1) H(r^2-4p) / 2|` must stay within this multiple of
/// `p - 1`.
pub const CURVE_COUNT_SLACK: u64 = 4;

/// Prime bound for brute-force orbit-size and isomorphism-criteria sweeps.
pub const ORBIT_PRIME_LIMIT: u64 = 60;

/// Family-average study: box half-widths and prime cutoff for the
/// dual-path comparison.
pub const FAMILY_BOX: u64 = 25;
pub const FAMILY_X: f64 = 200.0;

/// Weighted family sums from the per-curve and per-residue paths must
/// agree to this absolute tolerance (integer counts must agree exactly).
pub const FAMILY_WEIGHTED_TOL: f64 = 1e-9;

/// Random trace cross-check: sample count and prime cap.
pub const TRACE_SAMPLES: usize = 1000;
pub const TRACE_PRIME_LIMIT: u64 = 100_000;
pub const TRACE_SAMPLE_SEED: u64 = 0x5374_6154_6573_7401;

/// Euler-product cutoff used by the constant checks, and their bounds:
/// the exact ratio `K_2 / K_1 = 2`, the multiplicative splitting of `K_r`
/// for odd `r` up to `KR_SPLIT_MAX` (combined truncation tails plus
/// rounding), the window sum over `r <= 1000`, and the double partial sum
/// at `(10^4, 10^2)` against `K_1`.
pub const KR_CUTOFF: u64 = 100_000;
pub const KR_RATIO_TOL: f64 = 1e-12;
pub const KR_SPLIT_MAX: u64 = 50;
pub const KR_SPLIT_ROUNDING: f64 = 1e-10;
pub const KR_WINDOW_MAX: u64 = 1000;
pub const KR_WINDOW_SLACK: f64 = 5.0;
pub const KR_PARTIAL_U: u64 = 10_000;
pub const KR_PARTIAL_V: u64 = 100;
pub const KR_PARTIAL_TOL: f64 = 0.05;

/// Progression checks: modulus bound and window reach for the partition
/// identity, its absolute tolerance, and the pinned second-moment example.
pub const PARTITION_Q_MAX: u64 = 100;
pub const PARTITION_X_MAX: f64 = 100_000.0;
pub const PARTITION_TOL: f64 = 1e-9;
pub const BDH_EXAMPLE: (f64, f64, u64) = (10.0, 10.0, 2);
pub const BDH_EXAMPLE_VALUE: f64 = 1.0965;
pub const BDH_EXAMPLE_TOL: f64 = 1e-3;

/// Main-term calibration: the ratio `main_term / (x F)` on `[0.2, 0.8]`
/// must land in the band at the large size and sit closer to 1 there than
/// at the small size.
pub const MAIN_TERM_X_LARGE: f64 = 20_000.0;
pub const MAIN_TERM_X_MID: f64 = 10_000.0;
pub const MAIN_TERM_X_SMALL: f64 = 1_000.0;
pub const MAIN_TERM_ALPHA: f64 = 0.2;
pub const MAIN_TERM_BETA: f64 = 0.8;
pub const MAIN_TERM_BAND: (f64, f64) = (0.85, 1.15);

/// Trend study: growing boxes at fixed prime cutoff.  The gap between the
/// family average and the main term may move away from zero between
/// consecutive sizes by at most this relative hysteresis, and the
/// normalized second moment must shrink from the smallest box to the
/// largest.
pub const TREND_BOXES: [u64; 3] = [10, 20, 40];
pub const TREND_X: f64 = 5000.0;
pub const TREND_HYSTERESIS: f64 = 0.10;

/// Determinism probe: worker counts whose reports must match byte for
/// byte.
pub const DETERMINISM_WORKERS: [usize; 2] = [1, 8];

/// Relative tolerance recorded in the verification experiment reports'
/// exceptional-curve count.
pub const REPORT_REL_TOL: f64 = 0.5;
