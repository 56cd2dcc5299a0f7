//! Dirichlet characters modulo a prime and real characters attached to
//! negative discriminants.
//!
//! The full character group mod p is realized through a discrete-log table
//! on the least primitive root: character `k` sends `g^j` to
//! `e^(2*pi*i*j*k/(p-1))`.  Real characters `chi_d(n) = (d|n)` for a
//! discriminant `d` are tabulated over one period `|d|`, which turns long
//! character sums into table scans.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::numthy::modular::{is_prime64, mul_mod};
use crate::numthy::symbols::{kronecker, least_primitive_root};

/// Legendre-symbol lookup table modulo an odd prime.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    p: u64,
    table: Vec<i8>,
}

impl ResidueTable {
    pub fn new(p: u64) -> ResidueTable {
        debug_assert!(p >= 3 && p % 2 == 1);
        let mut table = vec![-1i8; p as usize];
        table[0] = 0;
        // Mark squares by enumeration: x holds i^2 mod p, advanced by the
        // odd-difference recurrence i^2 = (i-1)^2 + 2i - 1.
        let mut x = 0u64;
        for i in 1..p {
            x = (x + 2 * i - 1) % p;
            table[x as usize] = 1;
        }
        ResidueTable { p, table }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Legendre symbol of a residue already reduced to `[0, p)`.
    #[inline]
    pub fn chi(&self, r: u64) -> i8 {
        self.table[r as usize]
    }

    #[inline]
    pub fn chi_i64(&self, a: i64) -> i8 {
        self.table[(a as i128).rem_euclid(self.p as i128) as usize]
    }
}

/// The group of Dirichlet characters modulo a prime `p`.
///
/// Characters are indexed by `k` in `[0, p-1)`; index 0 is the principal
/// character and character `k` maps `g^j` to `e^(2*pi*i*j*k/(p-1))` for the
/// least primitive root `g`.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    p: u64,
    g: u64,
    dlog: Vec<u32>,
    roots: Vec<Complex64>,
}

impl CharacterGroup {
    pub fn new(p: u64) -> Result<CharacterGroup> {
        if !is_prime64(p) || p < 3 {
            return Err(Error::domain(format!(
                "character group requires an odd prime modulus, got {p}"
            )));
        }
        let g = least_primitive_root(p);
        let mut dlog = vec![0u32; p as usize];
        let mut x = 1u64;
        for j in 0..p - 1 {
            dlog[x as usize] = j as u32;
            x = mul_mod(x, g, p);
        }
        let order = (p - 1) as usize;
        let roots = (0..order)
            .map(|m| {
                let t = 2.0 * std::f64::consts::PI * m as f64 / order as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        Ok(CharacterGroup { p, g, dlog, roots })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Number of characters, `phi(p) = p - 1`.
    pub fn order(&self) -> u64 {
        self.p - 1
    }

    /// Discrete log of a nonzero residue.
    pub fn dlog(&self, r: u64) -> u32 {
        debug_assert!(r % self.p != 0);
        self.dlog[(r % self.p) as usize]
    }

    /// Evaluate character `k` at `n`.
    pub fn eval(&self, k: u64, n: i64) -> Complex64 {
        let r = (n as i128).rem_euclid(self.p as i128) as u64;
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.eval_residue(k, r)
    }

    /// Evaluate character `k` at a nonzero residue in `[1, p)`.
    #[inline]
    pub fn eval_residue(&self, k: u64, r: u64) -> Complex64 {
        let j = self.dlog[r as usize] as u64;
        self.roots[(j * k % (self.p - 1)) as usize]
    }

    /// The root of unity `e^(2*pi*i*exponent/(p-1))`, reduced mod `p - 1`.
    #[inline]
    pub fn root(&self, exponent: i64) -> Complex64 {
        let m = (exponent).rem_euclid((self.p - 1) as i64) as usize;
        self.roots[m]
    }

    /// Partial sum `sum_{n=1..N} chi_k(n)`.
    pub fn partial_sum(&self, k: u64, n_max: u64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 1..=n_max {
            acc += self.eval(k, n as i64);
        }
        acc
    }
}

/// The real character `chi_d(n) = (d|n)` tabulated over one period `|d|`.
///
/// Valid for negative discriminants `d = 0, 1 (mod 4)`; for those, the
/// Kronecker symbol in the upper argument is periodic in `n` with period
/// `|d|`.
#[derive(Debug, Clone)]
pub struct DiscriminantCharacter {
    d: i64,
    table: Vec<i8>,
}

impl DiscriminantCharacter {
    pub fn new(d: i64) -> Result<DiscriminantCharacter> {
        if d >= 0 || !(d % 4 == 0 || (d % 4 + 4) % 4 == 1) {
            return Err(Error::domain(format!(
                "discriminant character requires d < 0 with d = 0,1 (mod 4), got {d}"
            )));
        }
        let m = d.unsigned_abs() as usize;
        let mut table = vec![0i8; m];
        for r in 1..m {
            table[r] = kronecker(d, r as i64);
        }
        Ok(DiscriminantCharacter { d, table })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn period(&self) -> u64 {
        self.table.len() as u64
    }

    #[inline]
    pub fn chi(&self, n: u64) -> i8 {
        self.table[(n % self.table.len() as u64) as usize]
    }

    /// Iterator of values `chi(1), chi(2), ...` without division: the index
    /// wraps incrementally.
    pub fn values_from_one(&self) -> impl Iterator<Item = i8> + '_ {
        let m = self.table.len();
        let mut idx = 0usize;
        std::iter::from_fn(move || {
            idx += 1;
            if idx == m {
                idx = 0;
            }
            Some(self.table[idx])
        })
    }
}

/// Result of a character-sum bound check.
#[derive(Debug, Clone, Copy)]
pub struct PvCheck {
    /// `sum_{n<=N} chi_d(n)`, exact.
    pub sum: i64,
    /// `2 sqrt(|d|) ln|d|`.
    pub bound: f64,
    pub within: bool,
}

/// Check the partial character sum `sum_{n<=N} (d|n)` against the
/// `2 sqrt(|d|) ln|d|` bound for non-principal real characters.
pub fn polya_vinogradov_check(d: i64, n_max: u64) -> Result<PvCheck> {
    let chi = DiscriminantCharacter::new(d)?;
    let mut sum = 0i64;
    let mut it = chi.values_from_one();
    for _ in 0..n_max {
        sum += it.next().unwrap() as i64;
    }
    let ad = d.unsigned_abs() as f64;
    let bound = 2.0 * ad.sqrt() * ad.ln();
    Ok(PvCheck {
        sum,
        bound,
        within: (sum.unsigned_abs() as f64) <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numthy::symbols::jacobi;

    #[test]
    fn residue_table_matches_jacobi() {
        for p in [3u64, 5, 7, 11, 101, 499] {
            let t = ResidueTable::new(p);
            for r in 0..p {
                assert_eq!(t.chi(r), jacobi(r as i64, p).unwrap(), "r={r} p={p}");
            }
        }
    }

    #[test]
    fn character_group_rejects_composites() {
        assert!(CharacterGroup::new(8).is_err());
        assert!(CharacterGroup::new(15).is_err());
        assert!(CharacterGroup::new(1).is_err());
    }

    #[test]
    fn principal_character_and_legendre_slot() {
        // p = 3: characters are the principal one and the Legendre symbol.
        let g = CharacterGroup::new(3).unwrap();
        assert_eq!(g.eval(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(g.eval(0, 2), Complex64::new(1.0, 0.0));
        assert_eq!(g.eval(0, 3), Complex64::new(0.0, 0.0));
        assert!((g.eval(1, 2) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        // p = 7: character k = 3 has order 2, hence is the Legendre symbol.
        let g = CharacterGroup::new(7).unwrap();
        for n in 1..7i64 {
            let want = jacobi(n, 7).unwrap() as f64;
            assert!((g.eval(3, n) - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn character_sums_orthogonality_small_prime() {
        // With a_n = 1 for n = 1..4 and q = 5, the two sides of the
        // character/residue-class identity are both 16.
        let g = CharacterGroup::new(5).unwrap();
        let mut total = 0.0;
        for k in 0..4 {
            let s: Complex64 = (1..=4).map(|n| g.eval(k, n)).sum();
            total += s.norm_sqr();
        }
        assert!((total - 16.0).abs() < 1e-9, "total={total}");
    }

    #[test]
    fn discriminant_character_is_periodic() {
        for d in [-3i64, -4, -7, -8, -11, -15, -16, -19, -20, -24, -27] {
            let chi = DiscriminantCharacter::new(d).unwrap();
            for n in 1..200u64 {
                assert_eq!(chi.chi(n), kronecker(d, n as i64), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn discriminant_character_rejects_bad_d() {
        assert!(DiscriminantCharacter::new(-5).is_err());
        assert!(DiscriminantCharacter::new(-6).is_err());
        assert!(DiscriminantCharacter::new(4).is_err());
        assert!(DiscriminantCharacter::new(0).is_err());
    }

    #[test]
    fn pv_check_examples() {
        let c = polya_vinogradov_check(-4, 4).unwrap();
        assert_eq!(c.sum, 0);
        assert!(c.within);

        let c = polya_vinogradov_check(-3, 3).unwrap();
        assert_eq!(c.sum, 0);
        assert!(c.within);

        let c = polya_vinogradov_check(-19, 1).unwrap();
        assert_eq!(c.sum, 1);
        assert!((c.bound - 25.67).abs() < 0.01, "bound={}", c.bound);
        assert!(c.within);
    }
}
