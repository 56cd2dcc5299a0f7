//! Elliptic curves `y^2 = x^3 + ax + b`: Frobenius traces, isomorphism
//! classes over prime fields, and prime sums attached to one curve.
//!
//! Traces come from two independent backends.  The naive one evaluates the
//! quadratic character sum `-sum_x chi(x^3 + ax + b)`, which works for every
//! odd prime of good reduction including 3.  The baby-step giant-step one
//! recovers the group order inside the Hasse interval from a few sampled
//! points and falls back to the character sum when the interval is still
//! ambiguous.  Both agree exactly; the dispatcher picks by prime size.

mod bsgs;
mod classify;

pub use classify::{
    count_curves_with_trace, enumerate_iso_classes, IsoClass, IsoClassSet, TraceTable,
};
pub(crate) use classify::discriminant_vanishes;

use crate::error::{Error, Result};
use crate::numthy::characters::ResidueTable;
use crate::numthy::modular::{inv_mod, is_prime64, mul_mod, pow_mod, reduce_i64};
use crate::numthy::primes::PrimeTable;
use crate::numthy::symbols::{jacobi, quartic_symbol, Quartic};
use crate::satotate::IntervalSpec;
use crate::sum::LogSum;

/// Integer Weierstrass coefficients.  Singular pairs are representable;
/// operations that need a curve reject them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurveParams {
    pub a: i64,
    pub b: i64,
}

impl CurveParams {
    pub fn new(a: i64, b: i64) -> CurveParams {
        CurveParams { a, b }
    }

    /// `-16 (4a^3 + 27b^2)`.  Exact for `|a|, |b| < 2^40`.
    pub fn discriminant(&self) -> i128 {
        let a = self.a as i128;
        let b = self.b as i128;
        -16 * (4 * a * a * a + 27 * b * b)
    }

    /// Zero discriminant: the cubic has a repeated root over every field.
    pub fn is_globally_singular(&self) -> bool {
        let a = self.a as i128;
        let b = self.b as i128;
        4 * a * a * a + 27 * b * b == 0
    }

    /// Good reduction at `p`: the discriminant is a unit mod `p`.  Always
    /// false at `p = 2` (the factor 16) and for globally singular pairs.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.discriminant().rem_euclid(p as i128) != 0
    }
}

impl std::fmt::Display for CurveParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "E({}, {})", self.a, self.b)
    }
}

/// A Frobenius trace with its normalization `lambda / (2 sqrt p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceResult {
    pub p: u64,
    pub lambda: i64,
    pub normalized: f64,
}

impl TraceResult {
    fn new(p: u64, lambda: i64) -> TraceResult {
        TraceResult {
            p,
            lambda,
            normalized: lambda as f64 / (2.0 * (p as f64).sqrt()),
        }
    }

    /// Frobenius angle `arccos(lambda / (2 sqrt p))` in `[0, pi]`.
    pub fn angle(&self) -> f64 {
        self.normalized.clamp(-1.0, 1.0).acos()
    }
}

/// Trace backend selection.  `Auto` uses the character sum below
/// [`BSGS_THRESHOLD`] and group-order search at and above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    Naive,
    Bsgs,
    #[default]
    Auto,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Naive => "naive",
            Backend::Bsgs => "bsgs",
            Backend::Auto => "auto",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "naive" => Ok(Backend::Naive),
            "bsgs" => Ok(Backend::Bsgs),
            "auto" => Ok(Backend::Auto),
            other => Err(Error::domain(format!(
                "unknown backend {other:?}, expected naive, bsgs, or auto"
            ))),
        }
    }
}

/// Crossover prime for [`Backend::Auto`].
pub const BSGS_THRESHOLD: u64 = 10_000;

/// Check the modulus and reduce the coefficients, or explain the failure.
fn validated_reduction(e: CurveParams, p: u64) -> Result<(u64, u64)> {
    if !is_prime64(p) {
        return Err(Error::domain(format!("modulus {p} is not prime")));
    }
    if !e.has_good_reduction(p) {
        return Err(Error::reduction(format!("{e} has bad reduction at {p}")));
    }
    Ok((reduce_i64(e.a, p), reduce_i64(e.b, p)))
}

/// Frobenius trace by quadratic character sum, valid for every odd prime
/// of good reduction (including 3).
pub fn trace_naive(e: CurveParams, p: u64) -> Result<TraceResult> {
    let (a, b) = validated_reduction(e, p)?;
    let residues = ResidueTable::new(p);
    Ok(TraceResult::new(p, classify::char_sum_trace(&residues, a, b)))
}

/// Frobenius trace by group-order search in the Hasse interval.
///
/// Falls back to the character sum when the sampled orders leave several
/// candidate orders in the interval, and always at `p = 3`, where a curve
/// may have no affine point to sample.
pub fn trace_bsgs(e: CurveParams, p: u64) -> Result<TraceResult> {
    let (a, b) = validated_reduction(e, p)?;
    Ok(TraceResult::new(p, trace_reduced_bsgs(p, a, b)))
}

/// Trace with explicit backend choice.
pub fn trace(e: CurveParams, p: u64, backend: Backend) -> Result<TraceResult> {
    match backend {
        Backend::Naive => trace_naive(e, p),
        Backend::Bsgs => trace_bsgs(e, p),
        Backend::Auto => {
            if p < BSGS_THRESHOLD {
                trace_naive(e, p)
            } else {
                trace_bsgs(e, p)
            }
        }
    }
}

/// Character-sum trace for reduced coefficients, `None` for singular pairs.
pub(crate) fn trace_reduced_naive(residues: &ResidueTable, a: u64, b: u64) -> Option<i64> {
    let p = residues.prime();
    if classify::discriminant_vanishes(p, a, b) {
        None
    } else {
        Some(classify::char_sum_trace(residues, a, b))
    }
}

/// Group-order trace for reduced coefficients of a nonsingular pair.
pub(crate) fn trace_reduced_bsgs(p: u64, a: u64, b: u64) -> i64 {
    if p > 3 {
        if let Some(n) = bsgs::group_order_in_hasse(p, a, b) {
            return p as i64 + 1 - n as i64;
        }
    }
    let residues = ResidueTable::new(p);
    classify::char_sum_trace(&residues, a, b)
}

/// Size of the isomorphism orbit of `(a, b)` mod `p` under
/// `(a, b) -> (m^4 a, m^6 b)`.
///
/// `(p-1)/6` for `a = 0` when `p = 1 mod 3`, `(p-1)/4` for `b = 0` when
/// `p = 1 mod 4`, `(p-1)/2` otherwise.  Requires an odd prime of good
/// reduction.
pub fn iso_class_size(e: CurveParams, p: u64) -> u64 {
    debug_assert!(is_prime64(p) && p >= 3 && e.has_good_reduction(p));
    let a = reduce_i64(e.a, p);
    let b = reduce_i64(e.b, p);
    if a == 0 && p % 3 == 1 {
        (p - 1) / 6
    } else if b == 0 && p % 4 == 1 {
        (p - 1) / 4
    } else {
        (p - 1) / 2
    }
}

fn validated_pair(e1: CurveParams, e2: CurveParams, p: u64) -> Result<(u64, u64, u64, u64)> {
    let (a, b) = validated_reduction(e1, p)?;
    let (c, d) = validated_reduction(e2, p)?;
    Ok((a, b, c, d))
}

/// Isomorphism over `F_p` by direct search for a unit `m` with
/// `(c, d) = (m^4 a, m^6 b)`.  Works for every odd prime of good reduction.
pub fn is_isomorphic_by_search(e1: CurveParams, e2: CurveParams, p: u64) -> Result<bool> {
    let (a, b, c, d) = validated_pair(e1, e2, p)?;
    for m in 1..p {
        let m2 = mul_mod(m, m, p);
        let m4 = mul_mod(m2, m2, p);
        let m6 = mul_mod(m4, m2, p);
        if mul_mod(m4, a, p) == c && mul_mod(m6, b, p) == d {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Isomorphism over `F_p` by residue criteria, for `p > 3` and pairs with
/// all four coefficients nonzero mod `p`.
///
/// For `p = 1 mod 4`: `c/a` is a fourth power and `(c/a)^3 = (d/b)^2`.
/// For `p = 3 mod 4`: `c/a` and `d/b` are squares and `(c/a)^3 = (d/b)^2`.
/// The power congruence is required in both cases.
pub fn is_isomorphic_by_criteria(e1: CurveParams, e2: CurveParams, p: u64) -> Result<bool> {
    if p <= 3 {
        return Err(Error::domain(format!(
            "isomorphism criteria need p > 3, got {p}"
        )));
    }
    let (a, b, c, d) = validated_pair(e1, e2, p)?;
    if a == 0 || b == 0 || c == 0 || d == 0 {
        return Err(Error::domain(
            "isomorphism criteria need all coefficients nonzero mod p",
        ));
    }
    let a_inv = inv_mod(a, p).expect("unit");
    let b_inv = inv_mod(b, p).expect("unit");
    let ca = mul_mod(c, a_inv, p);
    let db = mul_mod(d, b_inv, p);
    let cube = pow_mod(ca, 3, p);
    let square = pow_mod(db, 2, p);
    if cube != square {
        return Ok(false);
    }
    if p % 4 == 1 {
        Ok(quartic_symbol(ca as i64, p)? == Quartic::ONE)
    } else {
        Ok(jacobi(ca as i64, p)? == 1 && jacobi(db as i64, p)? == 1)
    }
}

/// Isomorphism over `F_p` for `p > 3`: residue criteria off the axes,
/// direct search on them.  Axis membership is an isomorphism invariant, so
/// mismatched axes answer false immediately.
pub fn is_isomorphic(e1: CurveParams, e2: CurveParams, p: u64) -> Result<bool> {
    if p <= 3 {
        return Err(Error::domain(format!(
            "isomorphism test needs p > 3, got {p}"
        )));
    }
    let (a, b, c, d) = validated_pair(e1, e2, p)?;
    if (a == 0) != (c == 0) || (b == 0) != (d == 0) {
        return Ok(false);
    }
    if a == 0 || b == 0 {
        is_isomorphic_by_search(e1, e2, p)
    } else {
        is_isomorphic_by_criteria(e1, e2, p)
    }
}

/// `theta_E(x) = sum log p` over good primes `p <= x` whose normalized
/// trace lies in the closed interval.
///
/// Globally singular pairs have no good prime, so their sum is 0 at every
/// `x`.  Requires `x >= 1`.
pub fn theta_curve(e: CurveParams, iv: &IntervalSpec, x: f64, backend: Backend) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::domain(format!("theta needs x >= 1, got {x}")));
    }
    if e.is_globally_singular() {
        return Ok(0.0);
    }
    let table = PrimeTable::sieve(x as u64)?;
    let disc = e.discriminant();
    let mut sum = LogSum::ZERO;
    for idx in table.upto_indices(x as u64) {
        let p = table.prime(idx);
        if disc.rem_euclid(p as i128) == 0 {
            continue;
        }
        let result = trace(e, p, backend)?;
        if iv.contains(result.normalized) {
            sum.add_fixed(table.log_fixed(idx));
        }
    }
    Ok(sum.to_f64())
}
