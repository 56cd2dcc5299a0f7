//! Full trace tables over one prime and their partition into twist orbits.
//!
//! A table holds the Frobenius trace of every Weierstrass pair `(a, b)` mod
//! `p`, filled one isomorphism orbit at a time: the trace is computed once
//! per orbit by character sum and propagated to `(m^4 a, m^6 b)` for every
//! unit `m`.  Classes with a given trace are then recovered by sweeping the
//! table and claiming orbits, which measures each orbit size directly.

use crate::error::{Error, Result};
use crate::numthy::characters::ResidueTable;
use crate::numthy::modular::{is_prime64, isqrt, mul_mod};

/// Sentinel trace for pairs with `4a^3 + 27b^2 = 0` mod `p`.
const SINGULAR: i32 = i32::MIN;
const UNSET: i32 = i32::MAX;

/// Frobenius traces for all `p^2` coefficient pairs mod one odd prime.
#[derive(Debug, Clone)]
pub struct TraceTable {
    p: u64,
    traces: Vec<i32>,
}

impl TraceTable {
    /// Build the table for an odd prime by orbit propagation.
    pub fn build(p: u64) -> Result<TraceTable> {
        if p < 3 || !is_prime64(p) {
            return Err(Error::domain(format!(
                "trace table needs an odd prime, got {p}"
            )));
        }
        let pu = p as usize;
        let residues = ResidueTable::new(p);
        // Quartic and sextic powers of every unit, for orbit propagation.
        let mut pow4 = vec![0u64; pu];
        let mut pow6 = vec![0u64; pu];
        for m in 1..p {
            let m2 = mul_mod(m, m, p);
            let m4 = mul_mod(m2, m2, p);
            pow4[m as usize] = m4;
            pow6[m as usize] = mul_mod(m4, m2, p);
        }
        let mut traces = vec![UNSET; pu * pu];
        for a in 0..p {
            for b in 0..p {
                let idx = (a * p + b) as usize;
                if traces[idx] != UNSET {
                    continue;
                }
                if discriminant_vanishes(p, a, b) {
                    traces[idx] = SINGULAR;
                    continue;
                }
                let lambda = char_sum_trace(&residues, a, b) as i32;
                for m in 1..p {
                    let a2 = mul_mod(pow4[m as usize], a, p);
                    let b2 = mul_mod(pow6[m as usize], b, p);
                    traces[(a2 * p + b2) as usize] = lambda;
                }
            }
        }
        Ok(TraceTable { p, traces })
    }

    /// Rebuild a table from stored `(a, b, lambda)` records; pairs never
    /// mentioned are taken as singular.  The count of singular pairs must
    /// come out to exactly `p`, which catches truncated record sets.
    pub(crate) fn from_entries(
        p: u64,
        entries: impl IntoIterator<Item = (u64, u64, i32)>,
    ) -> Result<TraceTable> {
        if p < 3 || !is_prime64(p) {
            return Err(Error::domain(format!(
                "trace table needs an odd prime, got {p}"
            )));
        }
        let hasse = crate::numthy::modular::isqrt(4 * p) as i64;
        let mut traces = vec![SINGULAR; (p * p) as usize];
        for (a, b, lambda) in entries {
            if a >= p || b >= p {
                return Err(Error::integrity(format!(
                    "trace record ({a}, {b}) is out of range mod {p}"
                )));
            }
            if (lambda as i64).abs() > hasse {
                return Err(Error::integrity(format!(
                    "trace {lambda} at ({a}, {b}) violates the Hasse bound for {p}"
                )));
            }
            let idx = (a * p + b) as usize;
            if traces[idx] != SINGULAR {
                return Err(Error::integrity(format!(
                    "duplicate trace record for ({a}, {b}) mod {p}"
                )));
            }
            traces[idx] = lambda;
        }
        let table = TraceTable { p, traces };
        if table.singular_count() != p {
            return Err(Error::integrity(format!(
                "trace table for {p} has {} singular pairs, expected {p}",
                table.singular_count()
            )));
        }
        Ok(table)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Trace of `(a, b)` reduced mod `p`, or `None` for a singular pair.
    pub fn trace(&self, a: u64, b: u64) -> Option<i64> {
        let t = self.traces[((a % self.p) * self.p + b % self.p) as usize];
        if t == SINGULAR {
            None
        } else {
            Some(t as i64)
        }
    }

    /// Number of singular pairs in the table (always `p`).
    pub fn singular_count(&self) -> u64 {
        self.traces.iter().filter(|&&t| t == SINGULAR).count() as u64
    }

    /// One `p,a,b,lambda` row per nonsingular pair, in `(a, b)` scan order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,a,b,lambda\n");
        for a in 0..self.p {
            for b in 0..self.p {
                if let Some(l) = self.trace(a, b) {
                    out.push_str(&format!("{},{},{},{}\n", self.p, a, b, l));
                }
            }
        }
        out
    }
}

/// `4a^3 + 27b^2 = 0` mod `p`?
pub(crate) fn discriminant_vanishes(p: u64, a: u64, b: u64) -> bool {
    let a3 = mul_mod(mul_mod(a, a, p), a, p);
    (mul_mod(4 % p, a3, p) + mul_mod(27 % p, mul_mod(b, b, p), p)) % p == 0
}

/// `lambda = -sum_x chi(x^3 + ax + b)` for a nonsingular pair.
pub(crate) fn char_sum_trace(residues: &ResidueTable, a: u64, b: u64) -> i64 {
    let p = residues.prime();
    let mut sum = 0i64;
    for x in 0..p {
        let t = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b) % p;
        sum += residues.chi(t) as i64;
    }
    -sum
}

/// One isomorphism class: a representative pair, the orbit size, and
/// whether the orbit sits on a coordinate axis (`a = 0` or `b = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub a: u64,
    pub b: u64,
    pub size: u64,
    pub axis: bool,
}

/// All classes over one prime sharing one trace value.
pub struct IsoClassSet {
    pub p: u64,
    pub r: i64,
    pub classes: Vec<IsoClass>,
}

impl IsoClassSet {
    pub fn off_axis(&self) -> impl Iterator<Item = &IsoClass> {
        self.classes.iter().filter(|c| !c.axis)
    }

    pub fn axis_count(&self) -> usize {
        self.classes.iter().filter(|c| c.axis).count()
    }

    pub fn off_axis_count(&self) -> usize {
        self.classes.len() - self.axis_count()
    }

    /// Total curves with this trace: the sum of orbit sizes.
    pub fn total_curves(&self) -> u64 {
        self.classes.iter().map(|c| c.size).sum()
    }
}

/// Partition the curves with trace `r` into twist orbits.
///
/// Representatives are the first pair of each orbit in `(a, b)` scan order,
/// and sizes are measured by marking, so they double as an independent
/// check of the orbit-size formula.  Requires `|r| <= floor(2 sqrt p)`;
/// `r = 0` lists the supersingular classes.
pub fn enumerate_iso_classes(table: &TraceTable, r: i64) -> Result<IsoClassSet> {
    let p = table.p;
    let bound = isqrt(4 * p) as i64;
    if r.abs() > bound {
        return Err(Error::domain(format!(
            "trace {r} outside the Hasse bound {bound} for p = {p}"
        )));
    }
    let pu = p as usize;
    let mut pow4 = vec![0u64; pu];
    let mut pow6 = vec![0u64; pu];
    for m in 1..p {
        let m2 = mul_mod(m, m, p);
        let m4 = mul_mod(m2, m2, p);
        pow4[m as usize] = m4;
        pow6[m as usize] = mul_mod(m4, m2, p);
    }
    let mut claimed = vec![false; pu * pu];
    let mut classes = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if claimed[(a * p + b) as usize] || table.trace(a, b) != Some(r) {
                continue;
            }
            let mut size = 0u64;
            for m in 1..p {
                let a2 = mul_mod(pow4[m as usize], a, p);
                let b2 = mul_mod(pow6[m as usize], b, p);
                let idx = (a2 * p + b2) as usize;
                if !claimed[idx] {
                    claimed[idx] = true;
                    size += 1;
                }
            }
            classes.push(IsoClass {
                a,
                b,
                size,
                axis: a == 0 || b == 0,
            });
        }
    }
    Ok(IsoClassSet { p, r, classes })
}

/// Number of pairs `(a, b)` mod `p` with trace exactly `r`.
pub fn count_curves_with_trace(table: &TraceTable, r: i64) -> Result<u64> {
    Ok(enumerate_iso_classes(table, r)?.total_curves())
}
