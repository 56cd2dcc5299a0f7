//! Euler products and singular series for trace densities on average.
//!
//! The base constant is `C = prod_l (1 + 1/(l (l^2 - l - 1)))^{-1}` over
//! primes `l`, and the trace-`r` constant is `K_r = f(r) C` with the
//! multiplicative correction `f(r) = prod_{l | r} (1 + 1/(l^2 - l - 1))`.
//! `K_r` is also computed directly from its own Euler factors
//! `t(l) = l (l^2 - l - 1) / ((l - 1)(l^2 - 1))` for `l` not dividing `r`
//! and `s(l) = l^2 / (l^2 - 1)` for `l | r`, so the splitting is a real
//! cross-check rather than a restatement.  A third, much slower route to
//! `K_r` is the double sum over the character sums `c_f^r(n)`.

use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::numthy::modular::gcd;
use crate::numthy::primes::{FactorSieve, PrimeTable};
use crate::numthy::symbols::kronecker;
use crate::sum::KahanSum;

/// A truncated Euler product with a bound on the truncation error of its
/// logarithm: `|log(true) - log(value)| <= tail_bound`.
#[derive(Clone, Copy, Debug)]
pub struct TruncatedProduct {
    pub value: f64,
    pub cutoff: u64,
    pub tail_bound: f64,
}

/// `log t(l)`, evaluated as `log(1 - 1/(l^3 - l^2 - l + 1))`.
fn log_t(l: u64) -> f64 {
    let d = (l * l * l - l * l - l + 1) as f64;
    (-1.0 / d).ln_1p()
}

/// `log s(l)`, evaluated as `log(1 + 1/(l^2 - 1))`.
fn log_s(l: u64) -> f64 {
    let d = (l * l - 1) as f64;
    (1.0 / d).ln_1p()
}

/// Tail of `sum_{l > L} |log t(l)|` over primes: below `sum_{m > L} 2/m^3`,
/// hence below `1/L^2`.
fn tail_bound(cutoff: u64) -> f64 {
    let l = cutoff as f64;
    1.0 / (l * l)
}

fn validate_cutoff(cutoff: u64) -> Result<()> {
    if cutoff < 3 {
        return Err(Error::domain(format!(
            "Euler product cutoff must be at least 3, got {cutoff}"
        )));
    }
    Ok(())
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The base constant `C` from its own product formula.
pub fn c_constant(cutoff: u64) -> Result<TruncatedProduct> {
    validate_cutoff(cutoff)?;
    let table = PrimeTable::sieve(cutoff)?;
    let mut log_sum = KahanSum::new();
    for &l in table.primes() {
        let d = (l * (l * l - l - 1)) as f64;
        log_sum.add(-(1.0 / d).ln_1p());
    }
    Ok(TruncatedProduct {
        value: log_sum.value().exp(),
        cutoff,
        tail_bound: tail_bound(cutoff),
    })
}

/// `K_r` from its own Euler factors: `t(l)` at primes away from `r`,
/// `s(l)` at primes dividing `r`.  Factors at primes of `r` beyond the
/// cutoff are still included exactly, so the tail bound only covers the
/// truncated `t`-factors.
pub fn k_r(r: u64, cutoff: u64) -> Result<TruncatedProduct> {
    if r == 0 {
        return Err(Error::domain("K_r needs r >= 1"));
    }
    validate_cutoff(cutoff)?;
    let table = PrimeTable::sieve(cutoff)?;
    let mut log_sum = KahanSum::new();
    for &l in table.primes() {
        log_sum.add(if r % l == 0 { log_s(l) } else { log_t(l) });
    }
    for l in distinct_prime_factors(r) {
        if l > cutoff {
            log_sum.add(log_s(l));
        }
    }
    Ok(TruncatedProduct {
        value: log_sum.value().exp(),
        cutoff,
        tail_bound: tail_bound(cutoff),
    })
}

/// The exact correction ratio `K_r / K_1` as a rational:
/// `prod_{l | r} (l^2 - l) / (l^2 - l - 1)` over distinct primes.
pub fn f_mult(r: u64) -> Result<Ratio<u64>> {
    if r == 0 {
        return Err(Error::domain("f needs r >= 1"));
    }
    let mut ratio = Ratio::from_integer(1u64);
    for l in distinct_prime_factors(r) {
        ratio *= Ratio::new(l * l - l, l * l - l - 1);
    }
    Ok(ratio)
}

/// Sum of `K_r` for `r` in `lo..=hi`, sharing one prime table.
pub fn k_window_sum(lo: u64, hi: u64, cutoff: u64) -> Result<f64> {
    if lo == 0 || lo > hi {
        return Err(Error::domain(format!(
            "window needs 1 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    validate_cutoff(cutoff)?;
    let table = PrimeTable::sieve(cutoff)?;
    let mut base = KahanSum::new();
    for &l in table.primes() {
        base.add(log_t(l));
    }
    let base = base.value();
    let mut total = KahanSum::new();
    for r in lo..=hi {
        let mut log = base;
        for l in distinct_prime_factors(r) {
            if l <= cutoff {
                log += log_s(l) - log_t(l);
            } else {
                log += log_s(l);
            }
        }
        total.add(log.exp());
    }
    Ok(total.value())
}

/// The character sum `c_f^r(n)`: over residues `a` mod `4n` coprime to
/// `4n` with `gcd(r^2 - a f^2, 4n) = 4`, sum the Kronecker symbol
/// `(a / n)`.  Direct evaluation of the defining sum.
pub fn c_f_r(r: u64, f: u64, n: u64) -> Result<i64> {
    if r == 0 || f == 0 || n == 0 {
        return Err(Error::domain("c_f^r(n) needs r, f, n >= 1"));
    }
    let modulus = 4 * n as i64;
    let r2 = (r as i64) * (r as i64);
    let f2 = (f as i64) * (f as i64);
    let mut sum = 0i64;
    for a in 1..=modulus {
        if gcd(a as u64, modulus as u64) != 1 {
            continue;
        }
        let num = r2 - a * f2;
        if gcd(num.unsigned_abs(), modulus as u64) != 4 {
            continue;
        }
        sum += kronecker(a, n as i64) as i64;
    }
    Ok(sum)
}

/// `c_f^r(n)` by its multiplicative factorization, valid for odd `r` and
/// odd `f`.  Per prime power `l^e` exactly dividing `n`: `l = 2`
/// contributes `(-1)^e 2^{e-1}`; an odd `l` dividing both `r` and `f`
/// kills the sum (the gcd condition then fails for every residue); an odd
/// `l` dividing exactly one of them contributes `phi(l^e)` for even `e`
/// and `0` for odd `e`; the remaining odd `l` contribute `l^{e-1}(l - 2)`
/// for even `e` and `-l^{e-1}` for odd `e`.
pub fn c_f_r_mult(r: u64, f: u64, n: u64) -> Result<i64> {
    if r == 0 || f == 0 || n == 0 {
        return Err(Error::domain("c_f^r(n) needs r, f, n >= 1"));
    }
    if r % 2 == 0 || f % 2 == 0 {
        return Err(Error::domain(
            "the multiplicative form of c_f^r needs odd r and odd f",
        ));
    }
    let mut rest = n;
    let mut product = 1i64;
    let mut e2 = 0u32;
    while rest % 2 == 0 {
        rest /= 2;
        e2 += 1;
    }
    if e2 > 0 {
        let sign = if e2 % 2 == 0 { 1 } else { -1 };
        product *= sign * (1i64 << (e2 - 1));
    }
    let mut l = 3u64;
    while l * l <= rest {
        if rest % l == 0 {
            let mut e = 0u32;
            while rest % l == 0 {
                rest /= l;
                e += 1;
            }
            product *= odd_prime_factor(l, e, r, f);
            if product == 0 {
                return Ok(0);
            }
        }
        l += 2;
    }
    if rest > 1 {
        product *= odd_prime_factor(rest, 1, r, f);
    }
    Ok(product)
}

fn odd_prime_factor(l: u64, e: u32, r: u64, f: u64) -> i64 {
    let le1 = (l as i64).pow(e - 1);
    match (r % l == 0, f % l == 0) {
        (true, true) => 0,
        (true, false) | (false, true) => {
            if e % 2 == 0 {
                le1 * (l as i64 - 1)
            } else {
                0
            }
        }
        (false, false) => {
            if e % 2 == 0 {
                le1 * (l as i64 - 2)
            } else {
                -le1
            }
        }
    }
}

/// The truncated double sum `sum_{f <= V} sum_{n <= U} c_f^r(n) /
/// (f n phi(n f^2))` converging to `K_r` for odd `r`.  Even `f` terms
/// vanish for odd `r` and are skipped.
pub fn kr_partial_sum(u: u64, v: u64, r: u64) -> Result<f64> {
    if u == 0 || v == 0 {
        return Err(Error::domain("partial sum needs U, V >= 1"));
    }
    if r == 0 || r % 2 == 0 {
        return Err(Error::domain("partial sum needs odd r >= 1"));
    }
    let sieve = FactorSieve::new(u as usize);
    let mut sum = KahanSum::new();
    for f in (1..=v).step_by(2) {
        let f_primes = distinct_prime_factors(f);
        for n in 1..=u {
            let c = c_f_r_mult(r, f, n)?;
            if c == 0 {
                continue;
            }
            // phi(n f^2) over the distinct primes of n f
            let mut phi = n * f * f;
            for &l in sieve.prime_divisors(n).iter() {
                phi = phi / l * (l - 1);
            }
            for &l in &f_primes {
                if n % l != 0 {
                    phi = phi / l * (l - 1);
                }
            }
            sum.add(c as f64 / (f * n * phi) as f64);
        }
    }
    Ok(sum.value())
}
