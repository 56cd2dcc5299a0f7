//! Modular arithmetic on `u64` operands, widening through `u128` where
//! products can overflow.

/// Greatest common divisor.  `gcd(0, n) = n`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` for coprime `a`, via the extended Euclidean
/// algorithm.  Returns `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn reduce_i128(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin primality test, valid for all `u64`.
pub fn is_prime64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut e = d;
        while e != n - 1 {
            x = mul_mod(x, x, n);
            e <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
            if x == 1 {
                return false;
            }
        }
        return false;
    }
    true
}

/// Square root modulo an odd prime via Tonelli-Shanks.  Returns a root `y`
/// with `y^2 = a (mod p)` when one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // p = 1 (mod 4): full Tonelli-Shanks.
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x > 0 && x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        for m in [5u64, 97, 65_537, 999_999_937] {
            for a in [1u64, 2, 3, 17, 1234] {
                if gcd(a, m) == 1 {
                    let inv = inv_mod(a, m).unwrap();
                    assert_eq!(mul_mod(a, inv, m), 1, "a={a} m={m}");
                }
            }
        }
        assert_eq!(inv_mod(6, 9), None);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let trial = |n: u64| {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        };
        for n in 0..5_000 {
            assert_eq!(is_prime64(n), trial(n), "n={n}");
        }
        assert!(is_prime64(18_446_744_073_709_551_557));
        assert!(!is_prime64(18_446_744_073_709_551_555));
    }

    #[test]
    fn sqrt_mod_finds_roots_exactly_for_residues() {
        for p in [3u64, 5, 13, 17, 97, 10_007, 100_003] {
            for a in 0..p.min(200) {
                match sqrt_mod(a, p) {
                    Some(y) => assert_eq!(mul_mod(y, y, p), a % p),
                    None => assert_ne!(pow_mod(a, (p - 1) / 2, p), 1),
                }
            }
        }
    }

    #[test]
    fn isqrt_is_exact_floor() {
        for n in 0..100_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n={n}");
        }
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }
}
