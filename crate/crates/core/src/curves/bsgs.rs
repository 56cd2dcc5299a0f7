//! Group-order search inside the Hasse interval by baby-step giant-step.
//!
//! The order of a sampled point is found by locating a vanishing multiple
//! with a baby-step giant-step walk around `p + 1`, stripping primes to get
//! the exact point order, and accumulating the lcm over samples until a
//! single multiple fits in `[p + 1 - 2 sqrt(p), p + 1 + 2 sqrt(p)]`.  When
//! several candidates survive every sample (tiny or very lopsided groups)
//! the caller falls back to the naive character sum.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numthy::modular::{inv_mod, isqrt, lcm, mul_mod, pow_mod, sqrt_mod};

/// Affine point or the identity.
type Pt = Option<(u64, u64)>;

/// Short Weierstrass group law; only `a` enters the addition formulas.
struct CurveOps {
    p: u64,
    a: u64,
}

impl CurveOps {
    fn add(&self, lhs: Pt, rhs: Pt) -> Pt {
        let p = self.p;
        let (x1, y1) = match lhs {
            None => return rhs,
            Some(q) => q,
        };
        let (x2, y2) = match rhs {
            None => return lhs,
            Some(q) => q,
        };
        let slope = if x1 == x2 {
            if (p - y2) % p == y1 {
                return None; // inverse points (covers y = 0 doubling)
            }
            let num = (mul_mod(3 % p, mul_mod(x1, x1, p), p) + self.a) % p;
            let den = mul_mod(2 % p, y1, p);
            mul_mod(num, inv_mod(den, p).expect("nonzero tangent denominator"), p)
        } else {
            let num = (y2 + p - y1) % p;
            let den = (x2 + p - x1) % p;
            mul_mod(num, inv_mod(den, p).expect("nonzero chord denominator"), p)
        };
        let x3 = (mul_mod(slope, slope, p) + 2 * p - x1 - x2) % p;
        let y3 = (mul_mod(slope, (x1 + p - x3) % p, p) + p - y1) % p;
        Some((x3, y3))
    }

    fn neg(&self, pt: Pt) -> Pt {
        pt.map(|(x, y)| (x, (self.p - y) % self.p))
    }

    fn mul(&self, mut k: u64, pt: Pt) -> Pt {
        let mut acc = None;
        let mut base = pt;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }
}

/// Find a point with known square or zero right-hand side.
fn sample_point(p: u64, a: u64, b: u64, rng: &mut ChaCha8Rng) -> Pt {
    loop {
        let x = rng.gen_range(0..p);
        let t = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b) % p;
        if t == 0 {
            return Some((x, 0));
        }
        if pow_mod(t, (p - 1) / 2, p) == 1 {
            let y = sqrt_mod(t, p).expect("tested quadratic residue");
            return Some((x, y.min(p - y))); // canonical root for determinism
        }
    }
}

/// A positive multiple of the order of `pt`, found by matching
/// `(p+1 -+ i*stride) P = ±j P` with giant walks in both directions from
/// `(p+1) P`.  Covers every trace `t = p+1-m` with `|t| <= half_width`;
/// whichever relation fires first is a genuine multiple of the point
/// order, so order reduction afterwards gives the exact order.
fn vanishing_multiple(ops: &CurveOps, pt: Pt, half_width: u64) -> Option<u64> {
    let p = ops.p;
    let stride = isqrt(half_width) + 1;
    let mut baby = HashMap::new();
    // Insert j*P and -(j*P) so one lookup resolves both signs of j.
    let mut walk = pt;
    for j in 1..=stride {
        match walk {
            Some(q) => {
                baby.entry(q).or_insert((j, false));
                if let Some(nq) = ops.neg(walk) {
                    baby.entry(nq).or_insert((j, true));
                }
            }
            // j*P = O: the point order is exactly j.
            None => return Some(j),
        }
        walk = ops.add(walk, pt);
    }
    let anchor = ops.mul(p + 1, pt);
    let giant = ops.mul(stride, pt);
    let giant_neg = ops.neg(giant);
    let mut down = anchor;
    let mut up = anchor;
    for i in 0..=(half_width / stride + 1) {
        let base = i * stride;
        // For primes this small the walk can step past zero; only positive
        // multiples say anything about the point order.
        if let Some(m) = (p + 1).checked_sub(base) {
            match down {
                None if m > 0 => return Some(m),
                None => {}
                Some(q) => {
                    if let Some(&(j, negated)) = baby.get(&q) {
                        // (p+1 - base) P = ±j P
                        let cand = if negated { m + j } else { m.abs_diff(j) };
                        if cand > 0 {
                            return Some(cand);
                        }
                    }
                }
            }
        }
        if i > 0 {
            match up {
                None => return Some(p + 1 + base),
                Some(q) => {
                    if let Some(&(j, negated)) = baby.get(&q) {
                        // (p+1 + base) P = ±j P
                        return Some(if negated {
                            p + 1 + base + j
                        } else {
                            p + 1 + base - j
                        });
                    }
                }
            }
        }
        down = ops.add(down, giant_neg);
        up = ops.add(up, giant);
    }
    None
}

/// Strip primes from a vanishing multiple until it is the exact point order.
fn reduce_to_order(ops: &CurveOps, pt: Pt, mut m: u64) -> u64 {
    debug_assert!(m >= 1, "a vanishing multiple is positive");
    let mut factors = Vec::new();
    let mut rest = m;
    let mut q = 2u64;
    while q * q <= rest {
        if rest % q == 0 {
            factors.push(q);
            while rest % q == 0 {
                rest /= q;
            }
        }
        q += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    for &q in &factors {
        while m % q == 0 && ops.mul(m / q, pt).is_none() {
            m /= q;
        }
    }
    m
}

/// Number of points on `y^2 = x^3 + ax + b` over `F_p`, or `None` when the
/// Hasse window still admits several orders after all samples (the signal
/// to fall back to direct counting).
///
/// Deterministic: the point sampler is seeded from `(p, a, b)`.
pub(crate) fn group_order_in_hasse(p: u64, a: u64, b: u64) -> Option<u64> {
    const MAX_SAMPLES: u32 = 12;
    let half_width = isqrt(4 * p);
    let lo = p + 1 - half_width;
    let hi = p + 1 + half_width;
    let ops = CurveOps { p, a };
    let seed = crate::cache::fnv1a64(&{
        let mut bytes = [0u8; 24];
        bytes[..8].copy_from_slice(&p.to_le_bytes());
        bytes[8..16].copy_from_slice(&a.to_le_bytes());
        bytes[16..].copy_from_slice(&b.to_le_bytes());
        bytes
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut known = 1u64; // lcm of point orders found so far
    for _ in 0..MAX_SAMPLES {
        let k_lo = lo.div_ceil(known);
        let k_hi = hi / known;
        if k_lo > k_hi {
            return None;
        }
        if k_lo == k_hi {
            return Some(k_lo * known);
        }
        let pt = sample_point(p, a, b, &mut rng);
        let multiple = vanishing_multiple(&ops, pt, half_width)?;
        let order = reduce_to_order(&ops, pt, multiple);
        known = lcm(known, order);
    }
    None
}
