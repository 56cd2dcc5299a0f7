//! Chebyshev sums over primes in arithmetic progressions on short
//! windows, their deviations from the expected main term, and the
//! second-moment aggregate over moduli in the style of
//! Barban-Davenport-Halberstam.
//!
//! The window is always `(x, x + y]`.  Logarithms accumulate in the shared
//! fixed-point scheme, so a window total and any residue partition of it
//! agree to the last bit of the fixed-point grid regardless of worker
//! count or summation order.

use crate::error::{Error, Result};
use crate::numthy::modular::gcd;
use crate::numthy::primes::{euler_phi, PrimeTable};
use crate::sum::{KahanSum, LogSum};

fn validate_window(x: f64, y: f64) -> Result<()> {
    if !(x >= 0.0) || !(y >= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::domain(format!(
            "window needs finite x >= 0 and y >= 0, got x = {x}, y = {y}"
        )));
    }
    Ok(())
}

/// `theta(x, y; q, a) = sum of log p` over primes `x < p <= x + y` with
/// `p = a mod q`.  The residue is reduced mod `q`, so `q = 1` with `a = 0`
/// sums over every prime in the window.
pub fn theta_ap(x: f64, y: f64, q: u64, a: u64) -> Result<f64> {
    validate_window(x, y)?;
    if q == 0 {
        return Err(Error::domain("modulus q must be at least 1"));
    }
    let a = a % q;
    let table = PrimeTable::sieve((x + y).ceil() as u64)?;
    let mut sum = LogSum::ZERO;
    for idx in table.window_indices(x, y) {
        if table.prime(idx) % q == a {
            sum.add_fixed(table.log_fixed(idx));
        }
    }
    Ok(sum.to_f64())
}

/// Deviation `E(x, y; q, a) = theta(x, y; q, a) - y / phi(q)` for residues
/// coprime to the modulus.
pub fn e_ap(x: f64, y: f64, q: u64, a: u64) -> Result<f64> {
    validate_window(x, y)?;
    if q == 0 {
        return Err(Error::domain("modulus q must be at least 1"));
    }
    let a = a % q;
    if gcd(a, q) != 1 {
        return Err(Error::domain(format!(
            "residue {a} is not coprime to modulus {q}"
        )));
    }
    Ok(theta_ap(x, y, q, a)? - y / euler_phi(q) as f64)
}

/// Per-residue window sums for one modulus: `(a, theta, E)` for every
/// residue `a` coprime to `q`, ascending.
#[derive(Clone, Copy, Debug)]
pub struct ResidueDeviation {
    pub a: u64,
    pub theta: f64,
    pub e: f64,
}

pub fn residue_deviations(x: f64, y: f64, q: u64) -> Result<Vec<ResidueDeviation>> {
    validate_window(x, y)?;
    if q == 0 {
        return Err(Error::domain("modulus q must be at least 1"));
    }
    let table = PrimeTable::sieve((x + y).ceil() as u64)?;
    let mut by_residue = vec![LogSum::ZERO; q as usize];
    for idx in table.window_indices(x, y) {
        by_residue[(table.prime(idx) % q) as usize].add_fixed(table.log_fixed(idx));
    }
    let expected = y / euler_phi(q) as f64;
    Ok((0..q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| {
            let theta = by_residue[a as usize].to_f64();
            ResidueDeviation {
                a,
                theta,
                e: theta - expected,
            }
        })
        .collect())
}

/// Second moment `sum_{q <= q_max} sum_{a coprime to q} E(x, y; q, a)^2`.
pub fn bdh_moment(x: f64, y: f64, q_max: u64) -> Result<f64> {
    validate_window(x, y)?;
    if q_max == 0 {
        return Err(Error::domain("modulus bound must be at least 1"));
    }
    let table = PrimeTable::sieve((x + y).ceil() as u64)?;
    let window = table.window_indices(x, y);
    let mut total = KahanSum::new();
    for q in 1..=q_max {
        let mut by_residue = vec![LogSum::ZERO; q as usize];
        for idx in window.clone() {
            by_residue[(table.prime(idx) % q) as usize].add_fixed(table.log_fixed(idx));
        }
        let expected = y / euler_phi(q) as f64;
        for a in 0..q {
            if gcd(a, q) == 1 {
                let e = by_residue[a as usize].to_f64() - expected;
                total.add(e * e);
            }
        }
    }
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_examples() {
        // primes in (10, 20] congruent to 1 mod 4: 13 and 17
        let t = theta_ap(10.0, 10.0, 4, 1).unwrap();
        assert!((t - (13f64.ln() + 17f64.ln())).abs() < 1e-9);
        // all primes up to 10
        let t = theta_ap(0.0, 10.0, 1, 0).unwrap();
        assert!((t - 210f64.ln()).abs() < 1e-9);
        // empty window
        assert_eq!(theta_ap(0.0, 0.5, 1, 0).unwrap(), 0.0);
    }

    #[test]
    fn deviation_examples() {
        let e = e_ap(0.0, 10.0, 1, 0).unwrap();
        assert!((e - (210f64.ln() - 10.0)).abs() < 1e-9);
        // no primes in (0, 1]: theta = 0 and E = -1/phi(2) exactly
        assert_eq!(e_ap(0.0, 1.0, 2, 1).unwrap(), -1.0);
        assert_eq!(e_ap(0.0, 10.0, 4, 2).unwrap_err().kind(), "domain");
        // residues reduce mod q first
        assert_eq!(
            e_ap(0.0, 10.0, 4, 5).unwrap(),
            e_ap(0.0, 10.0, 4, 1).unwrap()
        );
    }

    #[test]
    fn residue_partition_reaches_total() {
        for q in [1u64, 2, 3, 4, 7, 12] {
            let total: f64 = (0..q)
                .map(|a| theta_ap(20.0, 280.0, q, a).unwrap())
                .sum();
            let want = theta_ap(20.0, 280.0, 1, 0).unwrap();
            assert!((total - want).abs() < 1e-9, "q={q}");
        }
    }

    #[test]
    fn moment_examples() {
        // (10, 20] holds 11, 13, 17, 19 and both q=1 and q=2 see them all
        let want = 2.0 * (46189f64.ln() - 10.0).powi(2);
        assert!((bdh_moment(10.0, 10.0, 2).unwrap() - want).abs() < 1e-9);
        // empty window: sum of (1/phi(q))^2 over coprime residues
        assert_eq!(bdh_moment(0.0, 1.0, 5).unwrap(), 3.25);
    }

    #[test]
    fn moment_matches_residue_deviations() {
        let mut total = 0.0;
        for q in 1..=20u64 {
            for row in residue_deviations(100.0, 150.0, q).unwrap() {
                total += row.e * row.e;
            }
        }
        let moment = bdh_moment(100.0, 150.0, 20).unwrap();
        assert!((moment - total).abs() < 1e-9);
    }

    #[test]
    fn domain_validation() {
        assert!(theta_ap(-1.0, 5.0, 1, 0).is_err());
        assert!(theta_ap(0.0, f64::NAN, 1, 0).is_err());
        assert!(theta_ap(0.0, 5.0, 0, 0).is_err());
        assert!(bdh_moment(0.0, 5.0, 0).is_err());
        assert!(residue_deviations(0.0, 5.0, 0).is_err());
    }
}
