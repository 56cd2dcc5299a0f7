//! Class numbers of negative discriminants.
//!
//! The operational definition of the class number `H(D)` used throughout
//! this crate is the count of ALL reduced positive-definite integral binary
//! quadratic forms of discriminant `D`, imprimitive forms included.  That
//! count equals the sum of primitive class numbers `h(d)` over the
//! decompositions `D = d f^2` with `d = 0, 1 (mod 4)`, and it is exactly the
//! quantity that matches isomorphism-class counts of elliptic curves with a
//! prescribed Frobenius trace (the Deuring correspondence, asserted in
//! tests).
//!
//! Two independent evaluation routes are provided: exhaustive reduced-form
//! enumeration (the production path, `O(sqrt |D|)` per value) and a
//! truncated Dirichlet L-series route with a certified tail, kept as a
//! cross-validator.

use crate::cache::pair_hash;
use crate::error::{Error, Result};
use crate::numthy::characters::DiscriminantCharacter;
use crate::numthy::modular::isqrt;
use crate::numthy::primes::{PrimeTable, MAX_SIEVE_LIMIT};
use crate::parallel::Pool;
use crate::satotate::IntervalSpec;
use crate::sum::KahanSum;

/// A negative integer congruent to 0 or 1 mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Discriminant> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::domain(format!(
                "discriminant must be negative and 0 or 1 mod 4, got {d}"
            )));
        }
        Ok(Discriminant(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A positive definite integral binary quadratic form `Ax^2 + Bxy + Cy^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FormTriple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl FormTriple {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// Reduced means `|B| <= A <= C`, with `B >= 0` when `|B| = A` or
    /// `A = C`.
    pub fn is_reduced(&self) -> bool {
        let ok = self.a > 0 && self.b.abs() <= self.a && self.a <= self.c;
        let boundary = self.b.abs() == self.a || self.a == self.c;
        ok && (!boundary || self.b >= 0)
    }

    pub fn is_primitive(&self) -> bool {
        let g = crate::numthy::modular::gcd(
            crate::numthy::modular::gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        );
        g == 1
    }
}

/// All decompositions `D = d f^2` with `d = 0, 1 (mod 4)`, in increasing `f`.
pub fn decompose(d: Discriminant) -> Vec<(i64, u64)> {
    let dd = d.value();
    let mut out = Vec::new();
    let mut f = 1u64;
    while (f * f) as i64 <= d.abs() as i64 {
        let sq = (f * f) as i64;
        if dd % sq == 0 {
            let inner = dd / sq;
            if matches!(inner.rem_euclid(4), 0 | 1) {
                out.push((inner, f));
            }
        }
        f += 1;
    }
    out
}

/// Enumerate every reduced form of discriminant `D`.
///
/// Forms with `0 < |B| < A < C` appear with both signs of `B`; boundary
/// forms appear once with `B >= 0`.
pub fn reduced_forms(d: Discriminant) -> Vec<FormTriple> {
    let abs = d.abs() as i64;
    let mut out = Vec::new();
    let mut b = abs & 1; // B has the parity of D
    while 3 * b * b <= abs {
        let m = (b * b + abs) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                out.push(FormTriple { a, b, c });
                if b > 0 && b < a && a < c {
                    out.push(FormTriple { a, b: -b, c });
                }
            }
            a += 1;
        }
        b += 2;
    }
    out
}

/// Count all reduced forms of discriminant `D`, imprimitive included.
///
/// This is the class number `H(D)` and the production path for tables.
pub fn reduced_form_count(d: Discriminant) -> u64 {
    form_count(d, false)
}

/// Count only the reduced forms with `gcd(A, B, C) = 1`: the primitive
/// class number `h(D)`.
pub fn reduced_form_count_primitive(d: Discriminant) -> u64 {
    form_count(d, true)
}

fn form_count(d: Discriminant, primitive_only: bool) -> u64 {
    let abs = d.abs() as i64;
    let mut count = 0u64;
    let mut b = abs & 1;
    while 3 * b * b <= abs {
        let m = (b * b + abs) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                if !primitive_only || (FormTriple { a, b, c }).is_primitive() {
                    // Both signs of B count unless the form sits on a
                    // reduction boundary (B=0, |B|=A, or A=C).
                    count += if b > 0 && b < a && a < c { 2 } else { 1 };
                }
            }
            a += 1;
        }
        b += 2;
    }
    count
}

/// Truncated value of `L(1, chi_d)` together with a certified tail bound.
#[derive(Debug, Clone, Copy)]
pub struct L1Estimate {
    /// `sum_{n<=U} (d|n)/n`.
    pub value: f64,
    /// `4 sqrt(|d|) ln|d| / U`: partial-summation constant 2 times the
    /// character-sum bound `2 sqrt(|d|) ln|d|`.
    pub tail_bound: f64,
}

/// Partial sum of the L-series of `chi_d` at 1 over `n <= terms`.
pub fn l1_truncated(d: Discriminant, terms: u64) -> Result<L1Estimate> {
    if terms == 0 {
        return Err(Error::domain("L-series truncation needs at least one term"));
    }
    let chi = DiscriminantCharacter::new(d.value())?;
    let mut acc = KahanSum::new();
    let mut values = chi.values_from_one();
    for n in 1..=terms {
        let v = values.next().unwrap();
        if v != 0 {
            acc.add(v as f64 / n as f64);
        }
    }
    let ad = d.abs() as f64;
    Ok(L1Estimate {
        value: acc.value(),
        tail_bound: 4.0 * ad.sqrt() * ad.ln() / terms as f64,
    })
}

/// How to evaluate a class number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassMode {
    /// Exhaustive reduced-form enumeration (exact, production path).
    Forms,
    /// Truncated L-series with certified tails, rounded to an integer
    /// (cross-validation path).
    Lseries,
}

/// Total tail budget allowed across all decomposition pairs in `Lseries`
/// mode; kept under the rounding guard so a certified computation can never
/// round to the wrong integer.
const LSERIES_TAIL_BUDGET: f64 = 0.3;

/// A pre-rounding value farther than this from an integer signals a bug or
/// an uncertified truncation; deliberately below 0.5 to leave margin for
/// float accumulation on top of the tail budget.
const LSERIES_ROUND_GUARD: f64 = 0.4;

/// Longest L-series truncation the Lseries mode will attempt.
const LSERIES_MAX_TERMS: u64 = 5_000_000_000;

/// Weight restoring unit-count conventions in the class number formula:
/// the discriminants -3 and -4 have 6 and 4 units instead of 2, so their
/// `sqrt(|d|) L(1, chi_d) / pi` values come out at 1/3 and 1/2 of the
/// primitive class number.
fn unit_weight(d: i64) -> u64 {
    match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

/// The class number `H(D)` by the requested route.
///
/// `Lseries` mode evaluates `sum over (d, f) of u(d) sqrt(|d|) L(1, chi_d) / pi`
/// with truncations certified to keep the total tail under the rounding
/// guard, then rounds; a pre-rounding value too far from an integer is a
/// consistency error.
pub fn kronecker_class_number(d: Discriminant, mode: ClassMode) -> Result<u64> {
    match mode {
        ClassMode::Forms => Ok(reduced_form_count(d)),
        ClassMode::Lseries => lseries_class_number(d),
    }
}

fn lseries_class_number(d: Discriminant) -> Result<u64> {
    let pairs = decompose(d);
    let per_pair = LSERIES_TAIL_BUDGET / pairs.len() as f64;
    let mut total = KahanSum::new();
    for &(inner, _f) in &pairs {
        let inner_d = Discriminant::new(inner)?;
        let u = unit_weight(inner);
        let ad = inner_d.abs() as f64;
        // Choose U so this pair's tail contribution to H stays under its
        // share of the budget: u * sqrt|d|/pi * tail(U) <= per_pair.
        let terms = (4.0 * u as f64 * ad * ad.ln() / (std::f64::consts::PI * per_pair)).ceil();
        if !(terms >= 1.0) || terms > LSERIES_MAX_TERMS as f64 {
            return Err(Error::resource(format!(
                "L-series truncation for d={inner} needs {terms:.0} terms"
            )));
        }
        let l1 = l1_truncated(inner_d, terms as u64)?;
        total.add(u as f64 * ad.sqrt() * l1.value / std::f64::consts::PI);
    }
    let value = total.value();
    let rounded = value.round();
    if (value - rounded).abs() >= LSERIES_ROUND_GUARD || rounded < 1.0 {
        return Err(Error::consistency(format!(
            "L-series class number for D={} did not certify: pre-rounding value {value}",
            d.value()
        )));
    }
    Ok(rounded as u64)
}

/// Largest trace `r` with `r^2 < 4p`, i.e. the top of the open Hasse range
/// `0 < r < 2 sqrt(p)`.
pub fn trace_bound(p: u64) -> u64 {
    isqrt(4 * p - 1)
}

/// Integer traces `r` with `2 sqrt(p) alpha <= r <= 2 sqrt(p) beta`, as an
/// inclusive range; empty when `lo > hi`.
///
/// For prime `p`, `2 sqrt(p)` is irrational, so for `p` below 2^50 the
/// float endpoints cannot land on an integer and rounding is unambiguous.
pub fn r_range_closed(p: u64, alpha: f64, beta: f64) -> (u64, u64) {
    let t = (4.0 * p as f64).sqrt();
    let lo = (t * alpha).ceil() as u64;
    let hi = (t * beta).floor() as u64;
    (lo.max(1), hi)
}

/// Integer traces `r` with `2 sqrt(p) alpha < r <= 2 sqrt(p) beta`; the
/// half-open companion that makes adjacent windows partition exactly.
pub fn r_range_half_open(p: u64, alpha: f64, beta: f64) -> (u64, u64) {
    let t = (4.0 * p as f64).sqrt();
    let lo = (t * alpha).floor() as u64 + 1;
    let hi = (t * beta).floor() as u64;
    (lo.max(1), hi)
}

/// One stored class number: `H = H(r^2 - 4p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableEntry {
    pub p: u64,
    pub r: u32,
    pub d: i64,
    pub h: u32,
}

/// Class numbers `H(r^2 - 4p)` for all primes `p <= limit` and all traces
/// `0 < r < 2 sqrt(p)`, stored as contiguous per-prime rows.
#[derive(Debug, Clone)]
pub struct ClassNumberTable {
    limit: u64,
    primes: Vec<u64>,
    offsets: Vec<usize>,
    values: Vec<u32>,
}

/// Build a [`ClassNumberTable`] with the default 1% L-series cross-check.
pub fn h_table(pool: &Pool, x: u64) -> Result<ClassNumberTable> {
    ClassNumberTable::build(pool, x, 10)
}

impl ClassNumberTable {
    /// Build the table for all `p <= x` by form enumeration, then re-derive
    /// a deterministic sample of `sample_per_mille / 1000` of the entries
    /// through the L-series route and require exact agreement.
    pub fn build(pool: &Pool, x: u64, sample_per_mille: u32) -> Result<ClassNumberTable> {
        if x < 5 {
            return Err(Error::domain(format!("table limit must be >= 5, got {x}")));
        }
        if x > MAX_SIEVE_LIMIT {
            return Err(Error::resource(format!(
                "table limit {x} exceeds the sieve ceiling {MAX_SIEVE_LIMIT}"
            )));
        }
        let primes = PrimeTable::sieve(x)?.primes().to_vec();
        let rows: Vec<Vec<u32>> = pool.map_indexed(primes.len(), |i| {
            let p = primes[i];
            (1..=trace_bound(p))
                .map(|r| {
                    let d = Discriminant((r * r) as i64 - 4 * p as i64);
                    reduced_form_count(d) as u32
                })
                .collect()
        });
        let table = ClassNumberTable::from_rows(x, primes, rows)?;
        table.cross_check_sample(pool, sample_per_mille)?;
        Ok(table)
    }

    pub(crate) fn from_rows(limit: u64, primes: Vec<u64>, rows: Vec<Vec<u32>>) -> Result<ClassNumberTable> {
        if primes.len() != rows.len() {
            return Err(Error::consistency("row count does not match prime count"));
        }
        let mut offsets = Vec::with_capacity(primes.len() + 1);
        let mut values = Vec::new();
        offsets.push(0usize);
        for (p, row) in primes.iter().zip(&rows) {
            if row.len() as u64 != trace_bound(*p) {
                return Err(Error::consistency(format!(
                    "row for p={p} has {} entries, expected {}",
                    row.len(),
                    trace_bound(*p)
                )));
            }
            values.extend_from_slice(row);
            offsets.push(values.len());
        }
        Ok(ClassNumberTable {
            limit,
            primes,
            offsets,
            values,
        })
    }

    /// Re-derive a deterministic pseudo-random sample of entries via the
    /// L-series route; any disagreement is a consistency error naming the
    /// entry.
    pub fn cross_check_sample(&self, pool: &Pool, sample_per_mille: u32) -> Result<()> {
        if sample_per_mille == 0 {
            return Ok(());
        }
        let sampled: Vec<TableEntry> = self
            .entries()
            .filter(|e| pair_hash(e.p, e.r) % 1000 < sample_per_mille as u64)
            .collect();
        let results = pool.map_indexed(sampled.len(), |i| {
            let e = sampled[i];
            kronecker_class_number(Discriminant(e.d), ClassMode::Lseries).map(|h| (e, h))
        });
        for res in results {
            let (e, lseries) = res?;
            if lseries != e.h as u64 {
                return Err(Error::consistency(format!(
                    "class numbers disagree at p={} r={}: forms={} lseries={lseries}",
                    e.p, e.r, e.h
                )));
            }
        }
        Ok(())
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn entry_count(&self) -> usize {
        self.values.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Class numbers for `p`, indexed by `r - 1`.
    pub fn row(&self, p: u64) -> Result<&[u32]> {
        let i = self
            .primes
            .binary_search(&p)
            .map_err(|_| Error::domain(format!("prime {p} is not covered by the table")))?;
        Ok(&self.values[self.offsets[i]..self.offsets[i + 1]])
    }

    /// `H(r^2 - 4p)` for `0 < r < 2 sqrt(p)`.
    pub fn h(&self, p: u64, r: u64) -> Result<u32> {
        let row = self.row(p)?;
        if r == 0 || r as usize > row.len() {
            return Err(Error::domain(format!(
                "trace {r} is outside 0 < r < 2 sqrt(p) for p={p}"
            )));
        }
        Ok(row[r as usize - 1])
    }

    /// `sum of H(r^2 - 4p)` over integer `r` in the closed window
    /// `[2 sqrt(p) alpha, 2 sqrt(p) beta]`.
    pub fn h_p_sum(&self, p: u64, iv: &IntervalSpec) -> Result<u64> {
        let row = self.row(p)?;
        let (lo, hi) = r_range_closed(p, iv.alpha(), iv.beta());
        if lo > hi {
            return Ok(0);
        }
        Ok(row[lo as usize - 1..hi as usize]
            .iter()
            .map(|&h| h as u64)
            .sum())
    }

    pub fn entries(&self) -> impl Iterator<Item = TableEntry> + '_ {
        self.primes.iter().enumerate().flat_map(move |(i, &p)| {
            self.values[self.offsets[i]..self.offsets[i + 1]]
                .iter()
                .enumerate()
                .map(move |(j, &h)| {
                    let r = (j + 1) as u32;
                    TableEntry {
                        p,
                        r,
                        d: (r as i64) * (r as i64) - 4 * p as i64,
                        h,
                    }
                })
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,r,D,H\n");
        for e in self.entries() {
            out.push_str(&format!("{},{},{},{}\n", e.p, e.r, e.d, e.h));
        }
        out
    }
}
