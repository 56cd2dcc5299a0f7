//! Averaged Sato-Tate experiments: the semicircle measure, family averages
//! over boxes of curve coefficients, the class-number main term, second
//! moments about the semicircle prediction, and exceptional-curve counts.

use crate::curves::Backend;
use crate::error::{Error, Result};
use crate::parallel::Pool;
use crate::quadforms::ClassNumberTable;
use crate::sum::{det_sum, KahanSum, LogSum};

/// A closed subinterval `[alpha, beta]` of `(0, 1]` for normalized traces.
///
/// Membership tests are closed on both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSpec {
    alpha: f64,
    beta: f64,
}

impl IntervalSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<IntervalSpec> {
        if !(alpha > 0.0 && alpha <= beta && beta <= 1.0) {
            return Err(Error::domain(format!(
                "interval requires 0 < alpha <= beta <= 1, got [{alpha}, {beta}]"
            )));
        }
        Ok(IntervalSpec { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Interval length `beta - alpha`.
    pub fn gamma(&self) -> f64 {
        self.beta - self.alpha
    }

    /// Closed-interval membership for a normalized trace.
    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.alpha <= t && t <= self.beta
    }

    /// Semicircle mass of the interval.
    pub fn measure(&self) -> f64 {
        f_measure(self.alpha, self.beta).expect("validated on construction")
    }
}

/// Semicircle (Sato-Tate) mass of `[alpha, beta]`:
/// `(2/pi) * integral of sqrt(1-t^2)` over the interval, in closed form
/// `(1/pi)[asin(beta) - asin(alpha) + beta*sqrt(1-beta^2) - alpha*sqrt(1-alpha^2)]`.
///
/// Accepts the full support `-1 <= alpha <= beta <= 1`.
pub fn f_measure(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha >= -1.0 && alpha <= beta && beta <= 1.0) {
        return Err(Error::domain(format!(
            "measure requires -1 <= alpha <= beta <= 1, got [{alpha}, {beta}]"
        )));
    }
    let term = |t: f64| t.asin() + t * (1.0 - t * t).sqrt();
    Ok((term(beta) - term(alpha)) / std::f64::consts::PI)
}

/// A coefficient box `{(a, b) : |a| <= A, |b| <= B}`.
///
/// The box holds `(2A+1)(2B+1)` lattice points; averages over it are
/// normalized by `4AB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxSpec {
    a_bound: i64,
    b_bound: i64,
}

impl BoxSpec {
    pub fn new(a_bound: i64, b_bound: i64) -> Result<BoxSpec> {
        if a_bound < 1 || b_bound < 1 {
            return Err(Error::domain(format!(
                "box requires A >= 1 and B >= 1, got A={a_bound} B={b_bound}"
            )));
        }
        Ok(BoxSpec { a_bound, b_bound })
    }

    pub fn a_bound(&self) -> i64 {
        self.a_bound
    }

    pub fn b_bound(&self) -> i64 {
        self.b_bound
    }

    /// Number of lattice points, `(2A+1)(2B+1)`.
    pub fn lattice_points(&self) -> u64 {
        (2 * self.a_bound as u64 + 1) * (2 * self.b_bound as u64 + 1)
    }

    /// The `4AB` normalizer used for family averages.
    pub fn normalizer(&self) -> f64 {
        4.0 * self.a_bound as f64 * self.b_bound as f64
    }

    /// Iterate all `(a, b)` in the box, row-major in `a` then `b`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> {
        let (abd, bbd) = (self.a_bound, self.b_bound);
        (-abd..=abd).flat_map(move |a| (-bbd..=bbd).map(move |b| (a, b)))
    }
}

/// How a family sweep visits the box.
///
/// `PerCurve` evaluates a trace for every coefficient pair at every prime.
/// `PerResidue` builds the full trace table mod each prime once and counts
/// box pairs through residue multiplicities; it is restricted to sweeps
/// with primes at most [`PER_RESIDUE_PRIME_CAP`] because it materializes
/// `p^2` traces per prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FamilyPath {
    #[default]
    PerCurve,
    PerResidue,
}

/// Largest prime the per-residue path will materialize a table for.
pub const PER_RESIDUE_PRIME_CAP: u64 = 512;

/// Residue pairs memoize their predicate up to this prime.
const MEMO_PRIME_CAP: u64 = 1448;

/// One prime's contribution to a family sweep: how many box pairs have
/// good reduction and a normalized trace inside the interval there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeContribution {
    pub p: u64,
    pub count: u64,
}

/// The result of sweeping one coefficient box against all odd primes up
/// to `x`: per-prime counts, and the prime sum `theta` of every curve in
/// the box on the fixed-point grid.
///
/// All derived statistics are functions of exact integer data, so they do
/// not depend on worker count or traversal order.
pub struct FamilySweep {
    x: f64,
    box_spec: BoxSpec,
    interval: IntervalSpec,
    per_prime: Vec<PrimeContribution>,
    theta_fixed: Vec<i128>,
}

impl FamilySweep {
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn box_spec(&self) -> BoxSpec {
        self.box_spec
    }

    pub fn interval(&self) -> IntervalSpec {
        self.interval
    }

    /// Per-prime counts, ascending in `p`.
    pub fn per_prime(&self) -> &[PrimeContribution] {
        &self.per_prime
    }

    /// `theta` of the curve at `idx` in box iteration order.
    pub fn theta(&self, idx: usize) -> f64 {
        LogSum(self.theta_fixed[idx]).to_f64()
    }

    /// Number of curves in the box (lattice points, axes included).
    pub fn curve_count(&self) -> usize {
        self.theta_fixed.len()
    }

    /// Family average: the box sum of `theta` over the `4AB` normalizer.
    /// Summed exactly on the fixed-point grid before one conversion.
    pub fn average(&self) -> f64 {
        let total: i128 = self.theta_fixed.iter().sum();
        LogSum(total).to_f64() / self.box_spec.normalizer()
    }

    /// Mean squared deviation of `theta` from the semicircle prediction
    /// `x F(alpha, beta)`, over the lattice points of the box.
    pub fn second_moment(&self) -> f64 {
        let center = self.x * self.interval.measure();
        let mut sum = KahanSum::new();
        for &t in &self.theta_fixed {
            let d = LogSum(t).to_f64() - center;
            sum.add(d * d);
        }
        sum.value() / self.box_spec.lattice_points() as f64
    }

    /// Number of curves whose `theta` misses the semicircle prediction by
    /// more than `rel_tol` of it.  An infinite tolerance accepts every
    /// curve.
    pub fn exceptional_count(&self, rel_tol: f64) -> Result<u64> {
        if rel_tol.is_nan() || rel_tol < 0.0 {
            return Err(Error::domain(format!(
                "relative tolerance must be nonnegative, got {rel_tol}"
            )));
        }
        let center = self.x * self.interval.measure();
        let allowed = rel_tol * center;
        Ok(self
            .theta_fixed
            .iter()
            .filter(|&&t| (LogSum(t).to_f64() - center).abs() > allowed)
            .count() as u64)
    }
}

/// Per-curve sweep task for one prime: count and list the box pairs whose
/// reduction passes the trace predicate.  Distinct residue pairs are
/// memoized for small primes, where the box revisits them many times.
fn per_curve_prime_task(
    p: u64,
    box_spec: &BoxSpec,
    iv: &IntervalSpec,
    backend: Backend,
) -> (u64, Vec<u32>) {
    let naive = match backend {
        Backend::Naive => true,
        Backend::Bsgs => false,
        Backend::Auto => p < crate::curves::BSGS_THRESHOLD,
    };
    let rt = naive.then(|| crate::numthy::characters::ResidueTable::new(p));
    let threshold = 2.0 * (p as f64).sqrt();
    let eval = |a: u64, b: u64| -> bool {
        let lambda = match &rt {
            Some(rt) => match crate::curves::trace_reduced_naive(rt, a, b) {
                Some(l) => l,
                None => return false,
            },
            None => {
                if crate::curves::discriminant_vanishes(p, a, b) {
                    return false;
                }
                crate::curves::trace_reduced_bsgs(p, a, b)
            }
        };
        iv.contains(lambda as f64 / threshold)
    };
    let mut memo = if p <= MEMO_PRIME_CAP {
        vec![0u8; (p * p) as usize]
    } else {
        Vec::new()
    };
    let mut hits = Vec::new();
    for (idx, (a, b)) in box_spec.iter().enumerate() {
        let ar = crate::numthy::modular::reduce_i64(a, p);
        let br = crate::numthy::modular::reduce_i64(b, p);
        let inside = if memo.is_empty() {
            eval(ar, br)
        } else {
            let key = (ar * p + br) as usize;
            match memo[key] {
                1 => true,
                2 => false,
                _ => {
                    let v = eval(ar, br);
                    memo[key] = if v { 1 } else { 2 };
                    v
                }
            }
        };
        if inside {
            hits.push(idx as u32);
        }
    }
    (hits.len() as u64, hits)
}

/// Per-residue sweep task for one prime: the same count through residue
/// multiplicities, cross-checked against a direct pair scan.
fn per_residue_prime_task(
    p: u64,
    box_spec: &BoxSpec,
    iv: &IntervalSpec,
) -> Result<(u64, Vec<u32>)> {
    let table = crate::curves::TraceTable::build(p)?;
    let threshold = 2.0 * (p as f64).sqrt();
    let mut inside = vec![false; (p * p) as usize];
    for a in 0..p {
        for b in 0..p {
            if let Some(lambda) = table.trace(a, b) {
                inside[(a * p + b) as usize] = iv.contains(lambda as f64 / threshold);
            }
        }
    }
    // Count through residue multiplicities: the number of box values of a
    // coefficient congruent to c mod p is floor((A-c)/p) + floor((A+c)/p) + 1.
    let residue_count = |bound: i64, c: u64| -> i64 {
        let c = c as i64;
        let p = p as i64;
        (bound - c).div_euclid(p) + (bound + c).div_euclid(p) + 1
    };
    let mut count = 0u64;
    for a in 0..p {
        let na = residue_count(box_spec.a_bound(), a);
        if na == 0 {
            continue;
        }
        for b in 0..p {
            if inside[(a * p + b) as usize] {
                count += na as u64 * residue_count(box_spec.b_bound(), b) as u64;
            }
        }
    }
    let mut hits = Vec::new();
    for (idx, (a, b)) in box_spec.iter().enumerate() {
        let ar = crate::numthy::modular::reduce_i64(a, p);
        let br = crate::numthy::modular::reduce_i64(b, p);
        if inside[(ar * p + br) as usize] {
            hits.push(idx as u32);
        }
    }
    if count != hits.len() as u64 {
        return Err(Error::consistency(format!(
            "residue multiplicities count {count} but the pair scan finds {} at p = {p}",
            hits.len()
        )));
    }
    Ok((count, hits))
}

/// Sweep the box against all odd primes up to `x` along the chosen path.
///
/// Both paths produce identical integer counts and identical fixed-point
/// `theta` values; the per-residue path requires `x` at most
/// [`PER_RESIDUE_PRIME_CAP`].  `p = 2` never contributes: no short
/// Weierstrass pair has good reduction there.
pub fn family_sweep(
    pool: &Pool,
    box_spec: &BoxSpec,
    iv: &IntervalSpec,
    x: f64,
    path: FamilyPath,
    backend: Backend,
) -> Result<FamilySweep> {
    if !(x >= 1.0) {
        return Err(Error::domain(format!("sweep needs x >= 1, got {x}")));
    }
    if path == FamilyPath::PerResidue && x > PER_RESIDUE_PRIME_CAP as f64 {
        return Err(Error::domain(format!(
            "the per-residue path supports x up to {PER_RESIDUE_PRIME_CAP}, got {x}"
        )));
    }
    let table = crate::numthy::primes::PrimeTable::sieve(x as u64)?;
    let idx_range = table.upto_indices(x as u64);
    let primes: Vec<usize> = idx_range.filter(|&i| table.prime(i) > 2).collect();
    let results: Vec<Result<(u64, Vec<u32>)>> = pool.map_indexed(primes.len(), |i| {
        let p = table.prime(primes[i]);
        match path {
            FamilyPath::PerCurve => Ok(per_curve_prime_task(p, box_spec, iv, backend)),
            FamilyPath::PerResidue => per_residue_prime_task(p, box_spec, iv),
        }
    });
    let mut per_prime = Vec::with_capacity(primes.len());
    let mut theta_fixed = vec![0i128; box_spec.lattice_points() as usize];
    for (i, result) in results.into_iter().enumerate() {
        let (count, hits) = result?;
        let p = table.prime(primes[i]);
        let log = table.log_fixed(primes[i]) as i128;
        for idx in hits {
            theta_fixed[idx as usize] += log;
        }
        per_prime.push(PrimeContribution { p, count });
    }
    Ok(FamilySweep {
        x,
        box_spec: *box_spec,
        interval: *iv,
        per_prime,
        theta_fixed,
    })
}

/// Family average of `theta` over the box: the sweep's headline number.
pub fn family_average(
    pool: &Pool,
    box_spec: &BoxSpec,
    iv: &IntervalSpec,
    x: f64,
    path: FamilyPath,
    backend: Backend,
) -> Result<f64> {
    Ok(family_sweep(pool, box_spec, iv, x, path, backend)?.average())
}

/// The class-number main term `sum_{p <= x} (log p / 2p) * sum_r H(r^2 - 4p)`
/// with `r` running over the closed trace range of the interval.
pub fn main_term(
    pool: &Pool,
    table: &ClassNumberTable,
    x: f64,
    iv: &IntervalSpec,
) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::domain(format!("main term needs x >= 1, got {x}")));
    }
    if x > table.limit() as f64 {
        return Err(Error::domain(format!(
            "main term at x = {x} needs a class-number table past its limit {}",
            table.limit()
        )));
    }
    let primes: Vec<u64> = table
        .primes()
        .iter()
        .copied()
        .filter(|&p| p as f64 <= x)
        .collect();
    let mut weights = Vec::with_capacity(primes.len());
    for &p in &primes {
        let h_sum = table.h_p_sum(p, iv)? as f64;
        weights.push(h_sum * (p as f64).ln() / (2.0 * p as f64));
    }
    Ok(det_sum(pool, weights.len(), |i| weights[i]))
}

/// One family experiment in a single record: the sweep statistics next to
/// the main term and the semicircle prediction.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
    pub a_bound: i64,
    pub b_bound: i64,
    pub backend: Backend,
    pub average: f64,
    pub main_term: f64,
    pub x_f: f64,
    pub second_moment: f64,
    pub exceptional_count: u64,
    pub rel_tol: f64,
}

fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

impl ExperimentReport {
    pub const CSV_HEADER: &'static str =
        "x,alpha,beta,A,B,backend,average,main_term,xF,second_moment,exceptional_count,rel_tol";

    /// Two-line CSV: header and one record, floats at 17 significant
    /// digits so the text round-trips to the same bits.  The leading
    /// columns record the run configuration; worker count is left out on
    /// purpose, since output must not depend on it.
    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
            Self::CSV_HEADER,
            sig17(self.x),
            sig17(self.alpha),
            sig17(self.beta),
            self.a_bound,
            self.b_bound,
            self.backend,
            sig17(self.average),
            sig17(self.main_term),
            sig17(self.x_f),
            sig17(self.second_moment),
            self.exceptional_count,
            sig17(self.rel_tol),
        )
    }

    /// The same values as a JSON object.  A non-finite tolerance becomes
    /// the string `"inf"`, everything else stays numeric.
    pub fn to_json(&self) -> String {
        let rel_tol = if self.rel_tol.is_finite() {
            sig17(self.rel_tol)
        } else {
            "\"inf\"".to_string()
        };
        format!(
            concat!(
                "{{\n",
                "  \"x\": {},\n",
                "  \"alpha\": {},\n",
                "  \"beta\": {},\n",
                "  \"A\": {},\n",
                "  \"B\": {},\n",
                "  \"backend\": \"{}\",\n",
                "  \"average\": {},\n",
                "  \"main_term\": {},\n",
                "  \"xF\": {},\n",
                "  \"second_moment\": {},\n",
                "  \"exceptional_count\": {},\n",
                "  \"rel_tol\": {}\n",
                "}}\n"
            ),
            sig17(self.x),
            sig17(self.alpha),
            sig17(self.beta),
            self.a_bound,
            self.b_bound,
            self.backend,
            sig17(self.average),
            sig17(self.main_term),
            sig17(self.x_f),
            sig17(self.second_moment),
            self.exceptional_count,
            rel_tol,
        )
    }
}

/// Run a full family experiment against an existing class-number table.
#[allow(clippy::too_many_arguments)]
pub fn run_experiment_with_table(
    pool: &Pool,
    table: &ClassNumberTable,
    box_spec: &BoxSpec,
    iv: &IntervalSpec,
    x: f64,
    path: FamilyPath,
    backend: Backend,
    rel_tol: f64,
) -> Result<ExperimentReport> {
    let sweep = family_sweep(pool, box_spec, iv, x, path, backend)?;
    Ok(ExperimentReport {
        x,
        alpha: iv.alpha(),
        beta: iv.beta(),
        a_bound: box_spec.a_bound(),
        b_bound: box_spec.b_bound(),
        backend,
        average: sweep.average(),
        main_term: main_term(pool, table, x, iv)?,
        x_f: x * iv.measure(),
        second_moment: sweep.second_moment(),
        exceptional_count: sweep.exceptional_count(rel_tol)?,
        rel_tol,
    })
}

/// Run a full family experiment, building the class-number table it
/// needs.
pub fn run_experiment(
    pool: &Pool,
    box_spec: &BoxSpec,
    iv: &IntervalSpec,
    x: f64,
    path: FamilyPath,
    backend: Backend,
    rel_tol: f64,
) -> Result<ExperimentReport> {
    let table_limit = (x.ceil() as u64).max(5);
    let table = crate::quadforms::h_table(pool, table_limit)?;
    run_experiment_with_table(pool, &table, box_spec, iv, x, path, backend, rel_tol)
}
