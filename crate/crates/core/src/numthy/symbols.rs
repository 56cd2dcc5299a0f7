//! Quadratic and quartic residue symbols.
//!
//! `jacobi` implements the classical Jacobi symbol for odd moduli;
//! `kronecker` extends it to arbitrary nonzero moduli with the standard
//! convention at 2: `(a|2)` is 0 for even `a`, +1 for `a = ±1 (mod 8)` and
//! -1 for `a = ±3 (mod 8)`.  The quartic symbol is defined for primes
//! `p = 1 (mod 4)` and takes values in the fourth roots of unity, embedded
//! into the complex plane by sending `g^((p-1)/4)` to `i` for the least
//! primitive root `g`.

use crate::error::{Error, Result};
use crate::numthy::modular::{mul_mod, pow_mod};

/// Jacobi symbol `(a|n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::domain(format!(
            "jacobi symbol requires an odd positive modulus, got {n}"
        )));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        Ok(sign)
    } else {
        Ok(0)
    }
}

/// Kronecker symbol `(a|n)` for any nonzero `n`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    assert!(n != 0, "kronecker symbol undefined for modulus 0");
    let mut n = n;
    let mut sign = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let e = n.trailing_zeros();
    let odd = (n >> e) as u64;
    if e > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let a8 = (a as i128).rem_euclid(8) as u64;
        let at2 = if a8 == 1 || a8 == 7 { 1i8 } else { -1i8 };
        if e % 2 == 1 {
            sign *= at2;
        }
    }
    sign * jacobi(a, odd).expect("odd part is odd")
}

/// A fourth root of unity (or zero), represented exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quartic {
    Zero,
    /// `i^k` with `k` in `0..4`.
    Root(u8),
}

impl Quartic {
    pub const ONE: Quartic = Quartic::Root(0);
    pub const I: Quartic = Quartic::Root(1);
    pub const MINUS_ONE: Quartic = Quartic::Root(2);
    pub const MINUS_I: Quartic = Quartic::Root(3);

    pub fn is_primitive(self) -> bool {
        matches!(self, Quartic::Root(1) | Quartic::Root(3))
    }

    /// Raise to an integer power.
    pub fn pow(self, k: i64) -> Quartic {
        match self {
            Quartic::Zero => Quartic::Zero,
            Quartic::Root(r) => Quartic::Root(((r as i64 * k).rem_euclid(4)) as u8),
        }
    }

    /// Value as a complex number `(re, im)`.
    pub fn to_complex(self) -> (f64, f64) {
        match self {
            Quartic::Zero => (0.0, 0.0),
            Quartic::Root(0) => (1.0, 0.0),
            Quartic::Root(1) => (0.0, 1.0),
            Quartic::Root(2) => (-1.0, 0.0),
            Quartic::Root(3) => (0.0, -1.0),
            Quartic::Root(_) => unreachable!(),
        }
    }

    /// The square of the symbol, as a quadratic symbol value.
    pub fn square_sign(self) -> i8 {
        match self {
            Quartic::Zero => 0,
            Quartic::Root(r) => {
                if r % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// Least primitive root modulo a prime, found by exhaustive order checking.
pub fn least_primitive_root(p: u64) -> u64 {
    assert!(p >= 3, "primitive root search expects an odd prime");
    'candidate: for g in 2..p {
        let mut x = g;
        let mut order = 1u64;
        while x != 1 {
            x = mul_mod(x, g, p);
            order += 1;
            if order > p {
                break 'candidate;
            }
        }
        if order == p - 1 {
            return g;
        }
    }
    unreachable!("no primitive root found; modulus was not prime")
}

/// Evaluator for the quartic residue symbol modulo a fixed prime
/// `p = 1 (mod 4)`.
#[derive(Debug, Clone)]
pub struct QuarticContext {
    p: u64,
    /// `g^((p-1)/4)` for the least primitive root `g`; the element mapped to
    /// the complex unit `i`.
    i_elem: u64,
}

impl QuarticContext {
    pub fn new(p: u64) -> Result<QuarticContext> {
        if !crate::numthy::modular::is_prime64(p) || p % 4 != 1 {
            return Err(Error::domain(format!(
                "quartic symbol requires a prime p = 1 (mod 4), got {p}"
            )));
        }
        let g = least_primitive_root(p);
        Ok(QuarticContext {
            p,
            i_elem: pow_mod(g, (p - 1) / 4, p),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn eval(&self, a: i64) -> Quartic {
        let a = (a as i128).rem_euclid(self.p as i128) as u64;
        if a == 0 {
            return Quartic::Zero;
        }
        let v = pow_mod(a, (self.p - 1) / 4, self.p);
        if v == 1 {
            Quartic::Root(0)
        } else if v == self.i_elem {
            Quartic::Root(1)
        } else if v == self.p - 1 {
            Quartic::Root(2)
        } else {
            debug_assert_eq!(v, self.p - self.i_elem);
            Quartic::Root(3)
        }
    }
}

/// One-shot quartic symbol `(a|p)_4`.
pub fn quartic_symbol(a: i64, p: u64) -> Result<Quartic> {
    Ok(QuarticContext::new(p)?.eval(a))
}
