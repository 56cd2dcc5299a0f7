//! Built-in verification suites.
//!
//! Each check re-derives one family of results through an independent route
//! and compares against the primary implementation, using the bounds pinned
//! in [`crate::calibration`].  The exact suite covers identities that must
//! hold to zero (or summation-level) tolerance; the statistical suite runs
//! the desk-scale experiments whose trends are checked against calibrated
//! bands.
//!
//! Expensive intermediate results (trace tables, class-number tables, the
//! experiment runs) are computed once per process and shared between
//! checks, so a full suite costs little more than its slowest member.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calibration::*;
use crate::curves::{
    count_curves_with_trace, enumerate_iso_classes, is_isomorphic_by_criteria,
    is_isomorphic_by_search, iso_class_size, trace, Backend, CurveParams, TraceTable,
};
use crate::error::{Error, Result};
use crate::lconstants::{c_constant, f_mult, k_r, k_window_sum, kr_partial_sum};
use crate::numthy::modular::{isqrt, mul_mod};
use crate::numthy::primes::PrimeTable;
use crate::parallel::Pool;
use crate::progressions::{bdh_moment, residue_deviations, theta_ap};
use crate::quadforms::{h_table, kronecker_class_number, ClassMode, ClassNumberTable};
use crate::satotate::{
    family_sweep, main_term, run_experiment_with_table, BoxSpec, ExperimentReport, FamilyPath,
    FamilySweep, IntervalSpec,
};
use crate::sum::KahanSum;

/// One verification result: a stable name, the verdict, and a one-line
/// summary of what was measured.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Exact,
    Statistical,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "exact" => Ok(Suite::Exact),
            "statistical" => Ok(Suite::Statistical),
            "all" => Ok(Suite::All),
            other => Err(Error::domain(format!(
                "unknown suite {other:?}, expected exact, statistical, or all"
            ))),
        }
    }
}

fn run_check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    match f() {
        Ok((passed, detail)) => CheckOutcome {
            name,
            passed,
            detail,
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Run a suite in declaration order.
pub fn run_suite(pool: &Pool, suite: Suite) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Exact | Suite::All) {
        out.push(check_class_number_dual_path(pool));
        out.push(check_class_counts_match_deuring(pool));
        out.push(check_curve_count_band(pool));
        out.push(check_orbit_sizes(pool));
        out.push(check_isomorphism_criteria(pool));
        out.push(check_family_dual_path(pool));
        out.push(check_backend_equivalence(pool));
        out.push(check_twist_symmetry(pool));
        out.push(check_euler_constants(pool));
        out.push(check_progression_partition(pool));
    }
    if matches!(suite, Suite::Statistical | Suite::All) {
        out.push(check_main_term_trend(pool));
        out.push(check_family_trend(pool));
        out.push(check_determinism(pool));
    }
    out
}

// Shared fixtures, built once per process.

static TRACE_TABLES: OnceLock<Result<Vec<TraceTable>>> = OnceLock::new();

fn trace_tables() -> &'static Result<Vec<TraceTable>> {
    TRACE_TABLES.get_or_init(|| {
        let primes = PrimeTable::sieve(CLASS_COUNT_PRIME_LIMIT)?;
        primes
            .primes()
            .iter()
            .filter(|&&p| p > 2)
            .map(|&p| TraceTable::build(p))
            .collect()
    })
}

static H_SMALL: OnceLock<Result<ClassNumberTable>> = OnceLock::new();

/// Form-count class numbers for all primes up to the agreement bound,
/// without the build-time sample check: the dual-path check below re-derives
/// every entry.
fn h_small(pool: &Pool) -> &'static Result<ClassNumberTable> {
    H_SMALL.get_or_init(|| ClassNumberTable::build(pool, CLASS_AGREEMENT_PRIME_LIMIT, 0))
}

static H_LARGE: OnceLock<Result<ClassNumberTable>> = OnceLock::new();

fn h_large(pool: &Pool) -> &'static Result<ClassNumberTable> {
    H_LARGE.get_or_init(|| h_table(pool, MAIN_TERM_X_LARGE as u64))
}

fn study_interval() -> IntervalSpec {
    IntervalSpec::new(MAIN_TERM_ALPHA, MAIN_TERM_BETA).expect("calibrated interval is valid")
}

struct FamilyFixture {
    curves: FamilySweep,
    residues: FamilySweep,
    csvs: Vec<String>,
}

static FAMILY: OnceLock<Result<FamilyFixture>> = OnceLock::new();

fn family_fixture(pool: &Pool) -> &'static Result<FamilyFixture> {
    FAMILY.get_or_init(|| {
        let bx = BoxSpec::new(FAMILY_BOX as i64, FAMILY_BOX as i64)?;
        let iv = study_interval();
        let curves = family_sweep(pool, &bx, &iv, FAMILY_X, FamilyPath::PerCurve, Backend::Auto)?;
        let residues =
            family_sweep(pool, &bx, &iv, FAMILY_X, FamilyPath::PerResidue, Backend::Auto)?;
        let table = h_table(pool, FAMILY_X as u64)?;
        let mut csvs = Vec::new();
        for &w in &DETERMINISM_WORKERS {
            let pw = Pool::new(w);
            let report = run_experiment_with_table(
                &pw,
                &table,
                &bx,
                &iv,
                FAMILY_X,
                FamilyPath::PerCurve,
                Backend::Auto,
                REPORT_REL_TOL,
            )?;
            csvs.push(report.to_csv());
        }
        Ok(FamilyFixture {
            curves,
            residues,
            csvs,
        })
    })
}

struct TrendFixture {
    reports: Vec<ExperimentReport>,
    csvs: Vec<String>,
}

static TREND: OnceLock<Result<TrendFixture>> = OnceLock::new();

fn trend_fixture(pool: &Pool) -> &'static Result<TrendFixture> {
    TREND.get_or_init(|| {
        let table = match h_large(pool) {
            Ok(t) => t,
            Err(e) => return Err(Error::consistency(format!("class-number table: {e}"))),
        };
        let iv = study_interval();
        let mut reports = Vec::new();
        let mut csvs = Vec::new();
        for &w in &DETERMINISM_WORKERS {
            let pw = Pool::new(w);
            let mut csv = String::from(ExperimentReport::CSV_HEADER);
            csv.push('\n');
            for &half in &TREND_BOXES {
                let bx = BoxSpec::new(half as i64, half as i64)?;
                let report = run_experiment_with_table(
                    &pw,
                    table,
                    &bx,
                    &iv,
                    TREND_X,
                    FamilyPath::PerCurve,
                    Backend::Bsgs,
                    REPORT_REL_TOL,
                )?;
                csv.push_str(report.to_csv().lines().nth(1).expect("record line"));
                csv.push('\n');
                if w == DETERMINISM_WORKERS[0] {
                    reports.push(report);
                }
            }
            csvs.push(csv);
        }
        Ok(TrendFixture { reports, csvs })
    })
}

/// Truncated-L-series class numbers must equal the form counts for every
/// stored trace discriminant.
pub fn check_class_number_dual_path(pool: &Pool) -> CheckOutcome {
    run_check("class-number-dual-path", || {
        let table = match h_small(pool) {
            Ok(t) => t,
            Err(e) => return Err(Error::consistency(format!("form-count table: {e}"))),
        };
        let entries: Vec<_> = table.entries().filter(|e| e.p > 3).collect();
        let results = pool.map_indexed(entries.len(), |i| {
            let e = entries[i];
            kronecker_class_number(crate::quadforms::Discriminant::new(e.d)?, ClassMode::Lseries)
                .map(|h| (e, h))
        });
        let mut checked = 0u64;
        for res in results {
            let (e, lseries) = res?;
            if lseries != e.h as u64 {
                return Ok((
                    false,
                    format!(
                        "p={} r={}: forms give {}, L-series gives {lseries}",
                        e.p, e.r, e.h
                    ),
                ));
            }
            checked += 1;
        }
        Ok((
            true,
            format!(
                "{checked} discriminants to p <= {CLASS_AGREEMENT_PRIME_LIMIT} agree exactly"
            ),
        ))
    })
}

/// Exhaustive isomorphism classification must produce exactly the class
/// number of the trace discriminant, per Deuring.
pub fn check_class_counts_match_deuring(pool: &Pool) -> CheckOutcome {
    run_check("iso-classes-equal-class-numbers", || {
        let tables = as_ref(trace_tables())?;
        let h = match h_small(pool) {
            Ok(t) => t,
            Err(e) => return Err(Error::consistency(format!("form-count table: {e}"))),
        };
        let mut checked = 0u64;
        for table in tables.iter().filter(|t| t.p() > 3) {
            let p = table.p();
            for r in 1..=isqrt(4 * p) {
                let classes = enumerate_iso_classes(table, r as i64)?.classes.len() as u64;
                let want = h.h(p, r)? as u64;
                if classes != want {
                    return Ok((
                        false,
                        format!("p={p} r={r}: {classes} classes, class number {want}"),
                    ));
                }
                checked += 1;
            }
        }
        Ok((
            true,
            format!("{checked} (p, r) cells to p <= {CLASS_COUNT_PRIME_LIMIT} agree exactly"),
        ))
    })
}

/// The number of curves with trace `r` must track `(p-1) H(r^2-4p) / 2`
/// within the calibrated multiple of `p - 1` that the axis classes allow.
pub fn check_curve_count_band(pool: &Pool) -> CheckOutcome {
    run_check("curve-count-band", || {
        let tables = as_ref(trace_tables())?;
        let h = match h_small(pool) {
            Ok(t) => t,
            Err(e) => return Err(Error::consistency(format!("form-count table: {e}"))),
        };
        let mut worst = 0.0f64;
        for table in tables {
            let p = table.p();
            for r in 1..=isqrt(4 * p) {
                let count = count_curves_with_trace(table, r as i64)? as i64;
                let half_ph = (p as i64 - 1) * h.h(p, r)? as i64;
                // 2 |count - (p-1) H / 2| <= 2 slack (p-1), kept in integers.
                let dev2 = (2 * count - half_ph).unsigned_abs();
                worst = worst.max(dev2 as f64 / (2 * (p - 1)) as f64);
                if dev2 > 2 * CURVE_COUNT_SLACK * (p - 1) {
                    return Ok((
                        false,
                        format!(
                            "p={p} r={r}: count {count} is {:.2} (p-1) from (p-1)H/2, allowed {CURVE_COUNT_SLACK}",
                            dev2 as f64 / (2 * (p - 1)) as f64
                        ),
                    ));
                }
            }
        }
        Ok((
            true,
            format!(
                "worst deviation {worst:.3} (p-1) within the {CURVE_COUNT_SLACK} (p-1) band"
            ),
        ))
    })
}

/// Brute-force twist-orbit sizes must match the closed-form case analysis.
pub fn check_orbit_sizes(_pool: &Pool) -> CheckOutcome {
    run_check("orbit-sizes", || {
        let tables = as_ref(trace_tables())?;
        let mut checked = 0u64;
        for table in tables.iter().filter(|t| t.p() <= ORBIT_PRIME_LIMIT) {
            let p = table.p();
            let mut pow4 = vec![0u64; p as usize];
            let mut pow6 = vec![0u64; p as usize];
            for m in 1..p {
                let m2 = mul_mod(m, m, p);
                let m4 = mul_mod(m2, m2, p);
                pow4[m as usize] = m4;
                pow6[m as usize] = mul_mod(m4, m2, p);
            }
            let mut seen = vec![false; (p * p) as usize];
            for a in 0..p {
                for b in 0..p {
                    if table.trace(a, b).is_none() {
                        continue;
                    }
                    let mut size = 0u64;
                    for m in 1..p {
                        let idx =
                            (mul_mod(pow4[m as usize], a, p) * p + mul_mod(pow6[m as usize], b, p))
                                as usize;
                        if !seen[idx] {
                            seen[idx] = true;
                            size += 1;
                        }
                    }
                    // Clear only what this orbit set, keeping the scan linear.
                    for m in 1..p {
                        let idx =
                            (mul_mod(pow4[m as usize], a, p) * p + mul_mod(pow6[m as usize], b, p))
                                as usize;
                        seen[idx] = false;
                    }
                    let formula = iso_class_size(CurveParams::new(a as i64, b as i64), p);
                    if size != formula {
                        return Ok((
                            false,
                            format!("p={p} (a,b)=({a},{b}): orbit {size}, formula {formula}"),
                        ));
                    }
                    checked += 1;
                }
            }
        }
        Ok((
            true,
            format!("{checked} orbits to p <= {ORBIT_PRIME_LIMIT} match the case analysis"),
        ))
    })
}

/// Residue-symbol isomorphism criteria must agree with exhaustive scaling
/// search on every equal-trace off-axis pair.
pub fn check_isomorphism_criteria(_pool: &Pool) -> CheckOutcome {
    run_check("isomorphism-criteria", || {
        let tables = as_ref(trace_tables())?;
        let mut checked = 0u64;
        let mut residues_seen = [false; 2];
        for table in tables
            .iter()
            .filter(|t| t.p() > 3 && t.p() <= ORBIT_PRIME_LIMIT)
        {
            let p = table.p();
            residues_seen[(p % 4 == 1) as usize] = true;
            let bound = isqrt(4 * p) as i64;
            let mut by_trace: Vec<Vec<CurveParams>> =
                vec![Vec::new(); (2 * bound + 1) as usize];
            for a in 1..p {
                for b in 1..p {
                    if let Some(r) = table.trace(a, b) {
                        by_trace[(r + bound) as usize]
                            .push(CurveParams::new(a as i64, b as i64));
                    }
                }
            }
            for list in &by_trace {
                for (i, &e1) in list.iter().enumerate() {
                    for &e2 in &list[i..] {
                        let fast = is_isomorphic_by_criteria(e1, e2, p)?;
                        let slow = is_isomorphic_by_search(e1, e2, p)?;
                        if fast != slow {
                            return Ok((
                                false,
                                format!(
                                    "p={p} {e1} vs {e2}: criteria say {fast}, search says {slow}"
                                ),
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
        if !(residues_seen[0] && residues_seen[1]) {
            return Err(Error::consistency(
                "sweep missed one residue class of p mod 4",
            ));
        }
        Ok((
            true,
            format!("{checked} equal-trace pairs to p <= {ORBIT_PRIME_LIMIT} agree"),
        ))
    })
}

/// The per-curve and per-residue family sweeps must produce identical
/// integer counts and matching weighted averages.
pub fn check_family_dual_path(pool: &Pool) -> CheckOutcome {
    run_check("family-dual-path", || {
        let fx = as_ref(family_fixture(pool))?;
        if fx.curves.per_prime() != fx.residues.per_prime() {
            let diff = fx
                .curves
                .per_prime()
                .iter()
                .zip(fx.residues.per_prime())
                .find(|(c, r)| c != r);
            return Ok((
                false,
                format!("per-prime counts disagree at {diff:?}"),
            ));
        }
        let (ac, ar) = (fx.curves.average(), fx.residues.average());
        let gap = (ac - ar).abs();
        if gap > FAMILY_WEIGHTED_TOL {
            return Ok((
                false,
                format!("averages {ac} and {ar} differ by {gap:e}"),
            ));
        }
        Ok((
            true,
            format!(
                "counts identical over {} primes, averages within {gap:e}",
                fx.curves.per_prime().len()
            ),
        ))
    })
}

/// The group-order backend must reproduce the character-sum trace on a
/// seeded random sample of curves and primes.
pub fn check_backend_equivalence(pool: &Pool) -> CheckOutcome {
    run_check("trace-backend-equivalence", || {
        let primes = PrimeTable::sieve(TRACE_PRIME_LIMIT)?;
        let list = primes.primes();
        let mut rng = ChaCha8Rng::seed_from_u64(TRACE_SAMPLE_SEED);
        let mut samples = Vec::with_capacity(TRACE_SAMPLES);
        while samples.len() < TRACE_SAMPLES {
            let p = list[rng.gen_range(0..list.len())];
            let a = rng.gen_range(-(p as i64)..=p as i64);
            let b = rng.gen_range(-(p as i64)..=p as i64);
            let e = CurveParams::new(a, b);
            if e.has_good_reduction(p) {
                samples.push((e, p));
            }
        }
        let results = pool.map_indexed(samples.len(), |i| {
            let (e, p) = samples[i];
            let naive = trace(e, p, Backend::Naive)?;
            let bsgs = trace(e, p, Backend::Bsgs)?;
            Ok::<_, Error>((e, p, naive.lambda, bsgs.lambda))
        });
        for res in results {
            let (e, p, naive, bsgs) = res?;
            if naive != bsgs {
                return Ok((
                    false,
                    format!("{e} at p={p}: character sum {naive}, group order {bsgs}"),
                ));
            }
        }
        Ok((
            true,
            format!("{TRACE_SAMPLES} random traces to p <= {TRACE_PRIME_LIMIT} agree"),
        ))
    })
}

/// Trace counts must be even in the trace and sum to `p^2 - p`.
pub fn check_twist_symmetry(_pool: &Pool) -> CheckOutcome {
    run_check("twist-symmetry", || {
        let tables = as_ref(trace_tables())?;
        let mut checked = 0u64;
        for table in tables.iter().filter(|t| t.p() > 3) {
            let p = table.p();
            let bound = isqrt(4 * p) as i64;
            let mut total = 0u64;
            for r in -bound..=bound {
                let pos = count_curves_with_trace(table, r)?;
                let neg = count_curves_with_trace(table, -r)?;
                if pos != neg {
                    return Ok((
                        false,
                        format!("p={p}: count({r}) = {pos} but count({}) = {neg}", -r),
                    ));
                }
                total += pos;
            }
            if total != p * p - p {
                return Ok((
                    false,
                    format!("p={p}: counts sum to {total}, not {}", p * p - p),
                ));
            }
            checked += 1;
        }
        Ok((
            true,
            format!("symmetry and completeness hold for {checked} primes"),
        ))
    })
}

/// The singular-series constants: exact small ratios, multiplicative
/// splitting, the near-linear window sum, and the double partial sum.
pub fn check_euler_constants(_pool: &Pool) -> CheckOutcome {
    run_check("euler-constants", || {
        let k1 = k_r(1, KR_CUTOFF)?;
        let k2 = k_r(2, KR_CUTOFF)?;
        let ratio_err = (k2.value / k1.value - 2.0).abs();
        if ratio_err > KR_RATIO_TOL {
            return Ok((false, format!("K_2/K_1 off 2 by {ratio_err:e}")));
        }
        let c = c_constant(KR_CUTOFF)?;
        let mut worst_split = 0.0f64;
        for r in 1..=KR_SPLIT_MAX {
            let k = k_r(r, KR_CUTOFF)?;
            let f = f_mult(r)?;
            let f = *f.numer() as f64 / *f.denom() as f64;
            let allowed = k.value * (k.tail_bound + c.tail_bound + KR_SPLIT_ROUNDING);
            let gap = (k.value - f * c.value).abs();
            worst_split = worst_split.max(gap / k.value);
            if gap > allowed {
                return Ok((
                    false,
                    format!("K_{r} splits off f(r) C by {gap:e}, allowed {allowed:e}"),
                ));
            }
        }
        let window = k_window_sum(1, KR_WINDOW_MAX, KR_CUTOFF)?;
        let window_gap = (window - KR_WINDOW_MAX as f64).abs();
        if window_gap > KR_WINDOW_SLACK {
            return Ok((
                false,
                format!("sum of K_r to {KR_WINDOW_MAX} is {window}, off by {window_gap}"),
            ));
        }
        let partial = kr_partial_sum(KR_PARTIAL_U, KR_PARTIAL_V, 1)?;
        let partial_gap = (partial - k1.value).abs();
        if partial_gap > KR_PARTIAL_TOL {
            return Ok((
                false,
                format!("S({KR_PARTIAL_U}, {KR_PARTIAL_V}, 1) = {partial} vs K_1 = {}", k1.value),
            ));
        }
        Ok((
            true,
            format!(
                "ratio err {ratio_err:.1e}, split err {worst_split:.1e}, window {window:.2}, partial gap {partial_gap:.4}"
            ),
        ))
    })
}

/// Prime sums in progressions must partition the global sum exactly, and
/// the pinned small second-moment value must reproduce.
pub fn check_progression_partition(_pool: &Pool) -> CheckOutcome {
    run_check("progression-partition", || {
        let global = theta_ap(0.0, PARTITION_X_MAX, 1, 0)?;
        let mut worst = 0.0f64;
        for q in 1..=PARTITION_Q_MAX {
            let mut lhs = KahanSum::new();
            for row in residue_deviations(0.0, PARTITION_X_MAX, q)? {
                lhs.add(row.theta);
            }
            let mut correction = 0.0;
            let mut m = q;
            let mut l = 2u64;
            while l * l <= m {
                if m % l == 0 {
                    correction += (l as f64).ln();
                    while m % l == 0 {
                        m /= l;
                    }
                }
                l += 1;
            }
            if m > 1 {
                correction += (m as f64).ln();
            }
            let gap = (lhs.value() - (global - correction)).abs();
            worst = worst.max(gap);
            if gap > PARTITION_TOL {
                return Ok((
                    false,
                    format!("q={q}: residue sums miss the global sum by {gap:e}"),
                ));
            }
        }
        let (x, y, q_max) = BDH_EXAMPLE;
        let moment = bdh_moment(x, y, q_max)?;
        let moment_gap = (moment - BDH_EXAMPLE_VALUE).abs();
        if moment_gap > BDH_EXAMPLE_TOL {
            return Ok((
                false,
                format!("second moment at ({x}, {y}, {q_max}) is {moment}, expected {BDH_EXAMPLE_VALUE}"),
            ));
        }
        Ok((
            true,
            format!(
                "partition exact to {worst:.1e} for q <= {PARTITION_Q_MAX}, moment {moment:.4}"
            ),
        ))
    })
}

/// The class-number main term over `x F` must sit in the calibrated band
/// at the large scale and approach 1 as the scale grows.
pub fn check_main_term_trend(pool: &Pool) -> CheckOutcome {
    run_check("main-term-trend", || {
        let table = match h_large(pool) {
            Ok(t) => t,
            Err(e) => return Err(Error::consistency(format!("class-number table: {e}"))),
        };
        let iv = study_interval();
        let ratio = |x: f64| -> Result<f64> {
            Ok(main_term(pool, table, x, &iv)? / (x * iv.measure()))
        };
        let small = ratio(MAIN_TERM_X_SMALL)?;
        let mid = ratio(MAIN_TERM_X_MID)?;
        let large = ratio(MAIN_TERM_X_LARGE)?;
        let detail = format!(
            "main term X F ratio: {small:.4} at x={MAIN_TERM_X_SMALL}, {mid:.4} at x={MAIN_TERM_X_MID}, {large:.4} at x={MAIN_TERM_X_LARGE}"
        );
        let (lo, hi) = MAIN_TERM_BAND;
        if !(large >= lo && large <= hi) {
            return Ok((false, format!("{detail}; large ratio escapes [{lo}, {hi}]")));
        }
        if (large - 1.0).abs() >= (small - 1.0).abs() {
            return Ok((
                false,
                format!("{detail}; ratio does not improve from small to large"),
            ));
        }
        Ok((true, detail))
    })
}

/// Growing the coefficient box at fixed prime cutoff must not worsen the
/// gap to the main term (up to hysteresis) and must shrink the normalized
/// second moment.
pub fn check_family_trend(pool: &Pool) -> CheckOutcome {
    run_check("family-trend", || {
        let fx = as_ref(trend_fixture(pool))?;
        let devs: Vec<f64> = fx
            .reports
            .iter()
            .map(|r| (r.average - r.main_term).abs())
            .collect();
        let moments: Vec<f64> = fx
            .reports
            .iter()
            .map(|r| r.second_moment / (r.x_f * r.x_f))
            .collect();
        let detail = format!(
            "boxes {TREND_BOXES:?}: main-term gaps {devs:?}, normalized moments {moments:?}"
        );
        for w in devs.windows(2) {
            if w[1] > w[0] * (1.0 + TREND_HYSTERESIS) {
                return Ok((
                    false,
                    format!("{detail}; gap grows past the {TREND_HYSTERESIS} hysteresis"),
                ));
            }
        }
        if moments[moments.len() - 1] >= moments[0] {
            return Ok((
                false,
                format!("{detail}; second moment fails to shrink"),
            ));
        }
        Ok((true, detail))
    })
}

/// Experiment reports must be byte-identical across worker counts.
pub fn check_determinism(pool: &Pool) -> CheckOutcome {
    run_check("worker-determinism", || {
        let family = as_ref(family_fixture(pool))?;
        if family.csvs.windows(2).any(|w| w[0] != w[1]) {
            return Ok((
                false,
                format!("family reports differ across workers {DETERMINISM_WORKERS:?}"),
            ));
        }
        let trend = as_ref(trend_fixture(pool))?;
        if trend.csvs.windows(2).any(|w| w[0] != w[1]) {
            return Ok((
                false,
                format!("trend reports differ across workers {DETERMINISM_WORKERS:?}"),
            ));
        }
        Ok((
            true,
            format!(
                "family and trend reports byte-identical across workers {DETERMINISM_WORKERS:?}"
            ),
        ))
    })
}

/// Borrow a shared fixture, converting a stored failure into a fresh error.
fn as_ref<T>(fixture: &'static Result<T>) -> Result<&'static T> {
    fixture
        .as_ref()
        .map_err(|e| Error::consistency(format!("shared fixture failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_check_wraps_errors() {
        let bad = run_check("probe", || Err(Error::domain("boom")));
        assert!(!bad.passed);
        assert!(bad.detail.contains("boom"));
        let good = run_check("probe", || Ok((true, "fine".into())));
        assert!(good.passed);
    }

    #[test]
    fn suite_parsing() {
        assert_eq!("exact".parse::<Suite>().unwrap(), Suite::Exact);
        assert_eq!("statistical".parse::<Suite>().unwrap(), Suite::Statistical);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("fast".parse::<Suite>().is_err());
    }

    #[test]
    fn orbit_check_passes() {
        let outcome = check_orbit_sizes(&Pool::new(1));
        assert!(outcome.passed, "{}", outcome.detail);
    }

    #[test]
    fn twist_check_passes() {
        let outcome = check_twist_symmetry(&Pool::new(1));
        assert!(outcome.passed, "{}", outcome.detail);
    }
}
