//! Independent oracles for the number-theory layer: trial division
//! against the sieve, the Euler criterion against the Jacobi symbol,
//! orthogonality identities for character groups, and partial-sum
//! bounds for real characters.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stav_core::numthy::characters::{polya_vinogradov_check, CharacterGroup, ResidueTable};
use stav_core::numthy::modular::{is_prime64, pow_mod};
use stav_core::numthy::primes::{FactorSieve, PrimeTable};
use stav_core::numthy::symbols::{jacobi, kronecker, quartic_symbol, Quartic};

#[test]
fn prime_counts_match_the_reference_values() {
    for (x, pi) in [
        (1u64, 0usize),
        (10, 4),
        (100, 25),
        (1_000, 168),
        (10_000, 1_229),
        (100_000, 9_592),
        (1_000_000, 78_498),
    ] {
        let table = PrimeTable::sieve(x).unwrap();
        assert_eq!(table.len(), pi, "pi({x})");
    }
}

#[test]
fn sieve_agrees_with_trial_division_and_miller_rabin() {
    let table = PrimeTable::sieve(10_000).unwrap();
    let mut idx = 0;
    for n in 0..=10_000u64 {
        let by_trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        let in_table = idx < table.len() && table.prime(idx) == n;
        if in_table {
            idx += 1;
        }
        assert_eq!(in_table, by_trial, "sieve vs trial division at {n}");
        assert_eq!(is_prime64(n), by_trial, "Miller-Rabin at {n}");
    }
    assert_eq!(idx, table.len());
}

#[test]
fn miller_rabin_handles_known_hard_composites() {
    // Strong pseudoprimes to small bases and Carmichael numbers.
    for n in [
        561u64,
        1105,
        1729,
        25_326_001,
        3_215_031_751,
        2_152_302_898_747,
        3_474_749_660_383,
        341_550_071_728_321,
    ] {
        assert!(!is_prime64(n), "{n} is composite");
    }
    for n in [2u64, 3, 5, (1 << 61) - 1, u64::MAX - 58] {
        assert!(is_prime64(n), "{n} is prime");
    }
}

#[test]
fn prime_logs_are_tight() {
    let table = PrimeTable::sieve(100_000).unwrap();
    for idx in 0..table.len() {
        let p = table.prime(idx) as f64;
        let rel = (table.log_f64(idx) - p.ln()).abs() / p.ln();
        assert!(rel <= 1e-12, "log {p} off by {rel:e}");
    }
}

#[test]
fn factor_sieve_agrees_with_trial_division() {
    let sieve = FactorSieve::new(10_000);
    for n in 2..=10_000u64 {
        let factors = sieve.factor(n);
        let product: u64 = factors.iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(product, n);
        for &(p, _) in &factors {
            assert!(is_prime64(p), "factor {p} of {n}");
        }
        for w in factors.windows(2) {
            assert!(w[0].0 < w[1].0, "factors sorted for {n}");
        }
    }
}

#[test]
fn jacobi_pinned_values_and_domain() {
    assert_eq!(jacobi(1, 9).unwrap(), 1);
    assert_eq!(jacobi(3, 7).unwrap(), -1);
    assert_eq!(jacobi(2, 15).unwrap(), 1);
    assert!(jacobi(3, 8).is_err(), "even lower argument rejected");
}

#[test]
fn jacobi_matches_the_euler_criterion() {
    let primes = PrimeTable::sieve(1_000).unwrap();
    for &p in primes.primes().iter().filter(|&&p| p > 2) {
        for a in 0..p {
            let euler = match pow_mod(a, (p - 1) / 2, p) {
                0 => 0i8,
                1 => 1,
                e => {
                    assert_eq!(e, p - 1, "Euler criterion lands on +-1, a={a} p={p}");
                    -1
                }
            };
            assert_eq!(jacobi(a as i64, p).unwrap(), euler, "a={a} p={p}");
        }
    }
}

#[test]
fn jacobi_is_completely_multiplicative_above() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a61_636f_6269);
    for _ in 0..10_000 {
        let n = 2 * rng.gen_range(0..500_000u64) + 1;
        let a = rng.gen_range(-1_000_000i64..=1_000_000);
        let b = rng.gen_range(-1_000_000i64..=1_000_000);
        let lhs = jacobi(a * b, n).unwrap();
        let rhs = jacobi(a, n).unwrap() * jacobi(b, n).unwrap();
        assert_eq!(lhs, rhs, "a={a} b={b} n={n}");
    }
}

#[test]
fn kronecker_extends_jacobi() {
    assert_eq!(kronecker(1, 2), 1);
    assert_eq!(kronecker(5, 2), -1);
    assert_eq!(kronecker(-19, 3), -1);
    for a in -50i64..=50 {
        let expected = match a.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
        assert_eq!(kronecker(a, 2), expected, "a={a} at 2");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b72_6f6e);
    for _ in 0..5_000 {
        let n = 2 * rng.gen_range(0..100_000u64) + 1;
        let a = rng.gen_range(-1_000_000i64..=1_000_000);
        assert_eq!(kronecker(a, n as i64), jacobi(a, n).unwrap(), "a={a} n={n}");
    }
}

#[test]
fn quartic_symbol_squares_to_the_legendre_symbol() {
    assert_eq!(quartic_symbol(1, 5).unwrap(), Quartic::ONE);
    assert_eq!(quartic_symbol(4, 5).unwrap(), Quartic::MINUS_ONE);
    assert!(quartic_symbol(2, 13).unwrap().is_primitive());
    assert!(quartic_symbol(1, 7).is_err(), "needs p = 1 (mod 4)");

    let primes = PrimeTable::sieve(500).unwrap();
    for &p in primes.primes().iter().filter(|&&p| p % 4 == 1) {
        for a in 1..p {
            let sq = quartic_symbol(a as i64, p).unwrap().square_sign();
            assert_eq!(sq, jacobi(a as i64, p).unwrap(), "a={a} p={p}");
            // The symbol is a fourth power of unity exactly when a is a
            // fourth power residue; cheap spot check via the value map.
            let val = pow_mod(a, (p - 1) / 4, p);
            let expect = if val == 1 {
                Quartic::ONE
            } else if val == p - 1 {
                Quartic::MINUS_ONE
            } else {
                // one of the two primitive roots; exact branch checked
                // through the square above
                quartic_symbol(a as i64, p).unwrap()
            };
            assert_eq!(quartic_symbol(a as i64, p).unwrap(), expect);
        }
    }
}

#[test]
fn residue_table_counts_squares() {
    for p in [3u64, 5, 7, 11, 13, 101, 499] {
        let t = ResidueTable::new(p);
        assert_eq!(t.chi(0), 0);
        let plus: u64 = (1..p).filter(|&r| t.chi(r) == 1).count() as u64;
        assert_eq!(plus, (p - 1) / 2, "p={p}");
        for s in 1..p.min(40) {
            for r in 1..p.min(40) {
                assert_eq!(t.chi(s * r % p), t.chi(s) * t.chi(r), "p={p}");
            }
        }
    }
}

#[test]
fn character_group_structure() {
    let g = CharacterGroup::new(13).unwrap();
    assert_eq!(g.order(), 12);
    for n in 1..13i64 {
        let principal = g.eval(0, n);
        assert!((principal - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
    // Pointwise product of characters is the character at the summed index.
    for k1 in 0..12u64 {
        for k2 in 0..12u64 {
            for n in 1..13i64 {
                let lhs = g.eval(k1, n) * g.eval(k2, n);
                let rhs = g.eval((k1 + k2) % 12, n);
                assert!((lhs - rhs).norm() < 1e-12, "k1={k1} k2={k2} n={n}");
            }
        }
    }
    assert!(CharacterGroup::new(15).is_err(), "composite modulus rejected");
    // The quadratic character sits at index (p-1)/2.
    let t = ResidueTable::new(13);
    for n in 1..13u64 {
        let from_group = g.eval(6, n as i64).re.round() as i8;
        assert_eq!(from_group, t.chi(n), "n={n}");
    }
}

#[test]
fn orthogonality_identity_for_random_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f72_7468);
    for q in [5u64, 61, 97] {
        let g = CharacterGroup::new(q).unwrap();
        let n_max = 200usize;
        let coeffs: Vec<Complex64> = (0..=n_max)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut lhs = 0.0;
        for k in 0..q - 1 {
            let mut s = Complex64::new(0.0, 0.0);
            for n in 1..=n_max {
                s += coeffs[n] * g.eval(k, n as i64);
            }
            lhs += s.norm_sqr();
        }
        let mut rhs = 0.0;
        for a in 1..q {
            let mut s = Complex64::new(0.0, 0.0);
            for n in 1..=n_max {
                if n as u64 % q == a {
                    s += coeffs[n];
                }
            }
            rhs += s.norm_sqr();
        }
        rhs *= (q - 1) as f64;
        assert!(
            (lhs - rhs).abs() <= 1e-9 * rhs.max(1.0),
            "q={q}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn fourth_moment_diagnostic_bound() {
    let primes = PrimeTable::sieve(200).unwrap();
    for &q in primes.primes().iter().filter(|&&q| q >= 5) {
        let g = CharacterGroup::new(q).unwrap();
        for n_max in [q / 2, q, 2 * q, 10 * q] {
            let mut moment = 0.0;
            for k in 1..q - 1 {
                moment += g.partial_sum(k, n_max).norm_sqr().powi(2);
            }
            let lq = (q as f64).ln();
            let cap = 10.0 * (n_max as f64).powi(2) * q as f64 * lq.powi(6);
            assert!(moment <= cap, "q={q} N={n_max}: {moment} > {cap}");
        }
    }
}

#[test]
fn polya_vinogradov_pinned_values() {
    let c = polya_vinogradov_check(-4, 4).unwrap();
    assert_eq!(c.sum, 0);
    let c = polya_vinogradov_check(-3, 3).unwrap();
    assert_eq!(c.sum, 0);
    let c = polya_vinogradov_check(-19, 1).unwrap();
    assert_eq!(c.sum, 1);
    assert!((c.bound - 2.0 * 19f64.sqrt() * 19f64.ln()).abs() < 1e-9);
    assert!(polya_vinogradov_check(-6, 5).is_err(), "d = 2 (mod 4) rejected");
    assert!(polya_vinogradov_check(5, 5).is_err(), "positive d rejected");
}

#[test]
fn polya_vinogradov_sweep_stays_within_bound() {
    let mut d = -3i64;
    while d >= -10_000 {
        if d.rem_euclid(4) <= 1 {
            let c = polya_vinogradov_check(d, d.unsigned_abs()).unwrap();
            assert!(c.within, "d={d} N=|d|: sum {} bound {}", c.sum, c.bound);
            let c = polya_vinogradov_check(d, 10 * d.unsigned_abs()).unwrap();
            assert!(c.within, "d={d} N=10|d|: sum {} bound {}", c.sum, c.bound);
        }
        d -= 1;
    }
}
