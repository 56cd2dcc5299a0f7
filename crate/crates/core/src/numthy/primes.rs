//! Prime sieving and factorization support.
//!
//! [`PrimeTable`] is the shared substrate for every prime-indexed sum in the
//! crate: it stores each prime together with its natural logarithm on the
//! fixed-point grid from [`crate::sum`], so log-weighted sums can be
//! accumulated exactly.

use crate::error::{Error, Result};
use crate::sum::{log_to_fixed, LOG_SCALE};

/// Soft capacity limit for sieving.  Above this the memory and time cost of a
/// flat sieve stops being reasonable for a workbench run.
pub const MAX_SIEVE_LIMIT: u64 = 2_000_000_000;

/// Ascending table of primes `p <= limit` with fixed-point `ln p`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    logs_fixed: Vec<i64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes over odd numbers up to `limit` inclusive.
    pub fn sieve(limit: u64) -> Result<PrimeTable> {
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::resource(format!(
                "sieve limit {limit} exceeds supported maximum {MAX_SIEVE_LIMIT}"
            )));
        }
        let mut primes = Vec::new();
        if limit >= 2 {
            primes.push(2);
        }
        if limit >= 3 {
            // composite[i] marks the odd number 2i+1.
            let n = ((limit - 1) / 2) as usize;
            let mut composite = vec![false; n + 1];
            let mut i = 1usize;
            while {
                let p = 2 * i + 1;
                p * p <= limit as usize
            } {
                if !composite[i] {
                    let p = 2 * i + 1;
                    let mut j = (p * p - 1) / 2;
                    while j <= n {
                        composite[j] = true;
                        j += p;
                    }
                }
                i += 1;
            }
            for (i, &c) in composite.iter().enumerate().skip(1) {
                if !c {
                    primes.push(2 * i as u64 + 1);
                }
            }
        }
        let logs_fixed = primes
            .iter()
            .map(|&p| log_to_fixed((p as f64).ln()))
            .collect();
        Ok(PrimeTable {
            limit,
            primes,
            logs_fixed,
        })
    }

    /// Rebuild a table from stored `(prime, log)` rows, as read from a cache.
    pub(crate) fn from_parts(limit: u64, primes: Vec<u64>, logs_fixed: Vec<i64>) -> PrimeTable {
        PrimeTable {
            limit,
            primes,
            logs_fixed,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prime(&self, idx: usize) -> u64 {
        self.primes[idx]
    }

    /// Fixed-point `ln p` for the prime at `idx`.
    pub fn log_fixed(&self, idx: usize) -> i64 {
        self.logs_fixed[idx]
    }

    /// `ln p` as a float (the fixed-point value, exactly representable).
    pub fn log_f64(&self, idx: usize) -> f64 {
        self.logs_fixed[idx] as f64 / LOG_SCALE
    }

    /// Index range of primes in the half-open real window `(x, x + y]`.
    pub fn window_indices(&self, x: f64, y: f64) -> std::ops::Range<usize> {
        let lo = self.primes.partition_point(|&p| p as f64 <= x);
        let hi = self.primes.partition_point(|&p| p as f64 <= x + y);
        lo..hi
    }

    /// Index range of primes `p <= x`.
    pub fn upto_indices(&self, x: u64) -> std::ops::Range<usize> {
        0..self.primes.partition_point(|&p| p <= x)
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }
}

/// Smallest-prime-factor sieve, for exact factorization of small integers.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    spf: Vec<u32>,
}

impl FactorSieve {
    pub fn new(limit: usize) -> FactorSieve {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        FactorSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Prime factorization as ascending `(prime, exponent)` pairs.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        assert!(n as usize <= self.limit(), "factor query beyond sieve limit");
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// Distinct prime divisors, ascending.
    pub fn prime_divisors(&self, n: u64) -> Vec<u64> {
        self.factor(n).into_iter().map(|(p, _)| p).collect()
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.factor(n).iter().all(|&(_, e)| e == 1)
    }

    /// Euler phi from the factorization.
    pub fn phi(&self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        let mut out = 1u64;
        for (p, e) in self.factor(n) {
            out *= p.pow(e - 1) * (p - 1);
        }
        out
    }
}

/// Euler phi by trial division, for moduli without a sieve at hand.
pub fn euler_phi(mut n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut out = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small_primes() {
        let t = PrimeTable::sieve(30).unwrap();
        assert_eq!(
            t.primes(),
            &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29],
            "primes up to 30"
        );
        assert_eq!(t.limit(), 30);
    }

    #[test]
    fn sieve_edge_limits() {
        assert!(PrimeTable::sieve(0).unwrap().is_empty());
        assert!(PrimeTable::sieve(1).unwrap().is_empty());
        assert_eq!(PrimeTable::sieve(2).unwrap().primes(), &[2]);
        assert_eq!(PrimeTable::sieve(3).unwrap().primes(), &[2, 3]);
        assert!(PrimeTable::sieve(MAX_SIEVE_LIMIT + 1).is_err());
    }

    #[test]
    fn window_indices_half_open() {
        let t = PrimeTable::sieve(100).unwrap();
        let w = t.window_indices(10.0, 10.0);
        let primes: Vec<u64> = w.map(|i| t.prime(i)).collect();
        assert_eq!(primes, vec![11, 13, 17, 19]);
        // Left endpoint excluded, right included.
        let w = t.window_indices(11.0, 2.0);
        let primes: Vec<u64> = w.map(|i| t.prime(i)).collect();
        assert_eq!(primes, vec![13]);
    }

    #[test]
    fn factor_sieve_reconstructs_n() {
        let fs = FactorSieve::new(10_000);
        for n in 2..=10_000u64 {
            let mut prod = 1u64;
            for (p, e) in fs.factor(n) {
                prod *= p.pow(e);
            }
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn phi_matches_coprime_count() {
        let fs = FactorSieve::new(500);
        for n in 1..=500u64 {
            let direct = (1..=n).filter(|&k| super::super::modular::gcd(k, n) == 1).count() as u64;
            assert_eq!(fs.phi(n), direct, "n={n}");
            assert_eq!(euler_phi(n), direct, "n={n}");
        }
    }
}
