//! Oracles for the class-number module: an independent brute-force form
//! enumerator, the decomposition identity over imprimitive forms, frozen
//! L-value limits, and the batch table fixtures.

use proptest::prelude::*;

use stav_core::quadforms::{
    decompose, h_table, kronecker_class_number, l1_truncated, reduced_form_count,
    reduced_form_count_primitive, trace_bound, ClassMode, Discriminant,
};
use stav_core::satotate::IntervalSpec;
use stav_core::Pool;

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

/// Count reduced positive-definite forms of discriminant `d` by a scan
/// independent of the library's enumerator.
fn brute_form_count(d: i64, primitive_only: bool) -> u64 {
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (b.abs() == a || a == c) {
                continue;
            }
            if primitive_only && gcd3(a, b.abs(), c) != 1 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn g(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a.abs()
    }
    g(g(a, b), c)
}

#[test]
fn discriminant_validation() {
    assert!(Discriminant::new(-3).is_ok());
    assert!(Discriminant::new(-4).is_ok());
    assert!(Discriminant::new(-5).is_err(), "-5 = 3 (mod 4)");
    assert!(Discriminant::new(0).is_err());
    assert!(Discriminant::new(4).is_err());
}

#[test]
fn pinned_class_numbers() {
    for (d, h) in [
        (-3i64, 1u64),
        (-4, 1),
        (-7, 1),
        (-8, 1),
        (-11, 1),
        (-12, 2),
        (-16, 2),
        (-19, 1),
        (-23, 3),
        (-24, 2),
        (-27, 2),
        (-36, 3),
        (-43, 1),
        (-67, 1),
        (-163, 1),
    ] {
        assert_eq!(reduced_form_count(disc(d)), h, "H({d})");
        assert_eq!(
            kronecker_class_number(disc(d), ClassMode::Lseries).unwrap(),
            h,
            "lseries H({d})"
        );
    }
}

#[test]
fn decomposition_examples() {
    assert_eq!(decompose(disc(-19)), vec![(-19, 1)]);
    assert_eq!(decompose(disc(-16)), vec![(-16, 1), (-4, 2)]);
    assert_eq!(decompose(disc(-36)), vec![(-36, 1), (-4, 3)]);
}

#[test]
fn all_forms_count_decomposes_into_primitive_counts() {
    let mut d = -3i64;
    while d >= -10_000 {
        if d.rem_euclid(4) <= 1 {
            let total = reduced_form_count(disc(d));
            let by_parts: u64 = decompose(disc(d))
                .into_iter()
                .map(|(fund, _)| reduced_form_count_primitive(disc(fund)))
                .sum();
            assert_eq!(total, by_parts, "d={d}");
        }
        d -= 1;
    }
}

#[test]
fn library_enumerator_matches_the_brute_scan() {
    let mut d = -3i64;
    while d >= -2_000 {
        if d.rem_euclid(4) <= 1 {
            assert_eq!(reduced_form_count(disc(d)), brute_form_count(d, false), "d={d}");
            assert_eq!(
                reduced_form_count_primitive(disc(d)),
                brute_form_count(d, true),
                "primitive d={d}"
            );
        }
        d -= 1;
    }
}

#[test]
fn lseries_mode_agrees_on_a_spread_of_discriminants() {
    let mut d = -3i64;
    while d >= -4_000 {
        if d.rem_euclid(4) <= 1 && (d.unsigned_abs() <= 120 || d % 17 == -13) {
            let forms = kronecker_class_number(disc(d), ClassMode::Forms).unwrap();
            let lseries = kronecker_class_number(disc(d), ClassMode::Lseries).unwrap();
            assert_eq!(forms, lseries, "d={d}");
        }
        d -= 1;
    }
}

#[test]
fn l_values_approach_their_closed_forms() {
    let pi = std::f64::consts::PI;
    for (d, limit) in [
        (-4i64, pi / 4.0),
        (-3, pi / (3.0 * 3f64.sqrt())),
        (-19, pi / 19f64.sqrt()),
    ] {
        let est = l1_truncated(disc(d), 100_000).unwrap();
        assert!(
            (est.value - limit).abs() <= est.tail_bound,
            "d={d}: {} vs {limit} (tail {})",
            est.value,
            est.tail_bound
        );
    }
}

#[test]
fn l_value_truncation_is_stable() {
    for d in [-3i64, -4, -7, -19, -163] {
        for u in [1_000u64, 10_000, 100_000] {
            let at_u = l1_truncated(disc(d), u).unwrap();
            let at_2u = l1_truncated(disc(d), 2 * u).unwrap();
            assert!(
                (at_u.value - at_2u.value).abs() <= at_u.tail_bound,
                "d={d} U={u}"
            );
        }
    }
}

#[test]
fn small_tables_match_the_hand_fixtures() {
    let pool = Pool::new(2);
    let t5 = h_table(&pool, 5).unwrap();
    for (r, h) in [(1u64, 1u32), (2, 2), (3, 1), (4, 1)] {
        assert_eq!(t5.h(5, r).unwrap(), h, "H at p=5 r={r}");
    }
    let t7 = h_table(&pool, 7).unwrap();
    for (r, h) in [(1u64, 2u32), (2, 2), (3, 1), (4, 2), (5, 1)] {
        assert_eq!(t7.h(7, r).unwrap(), h, "H at p=7 r={r}");
    }
    let expected: usize = t7.primes().iter().map(|&p| trace_bound(p) as usize).sum();
    assert_eq!(t7.entry_count(), expected);
    assert!(t7.to_csv().starts_with("p,r,D,H\n"));
}

#[test]
fn table_entries_match_single_shot_recomputation() {
    let pool = Pool::new(2);
    let table = h_table(&pool, 200).unwrap();
    for &p in table.primes() {
        for r in 1..=trace_bound(p) {
            let d = disc((r * r) as i64 - 4 * p as i64);
            assert_eq!(
                table.h(p, r).unwrap() as u64,
                reduced_form_count(d),
                "p={p} r={r}"
            );
        }
    }
    table.cross_check_sample(&pool, 120).expect("sampled cross-check");
}

#[test]
fn interval_sums_match_hand_ranges() {
    let pool = Pool::new(2);
    let table = h_table(&pool, 7).unwrap();
    let iv = IntervalSpec::new(0.3, 0.9).unwrap();
    assert_eq!(table.h_p_sum(5, &iv).unwrap(), 4, "r in 2..=4 at p=5");
    let pin = IntervalSpec::new(0.5, 0.5).unwrap();
    assert_eq!(table.h_p_sum(5, &pin).unwrap(), 0, "no integer at sqrt 5");
    let low = IntervalSpec::new(0.1, 0.2).unwrap();
    assert_eq!(table.h_p_sum(7, &low).unwrap(), 2, "only r=1 at p=7");
}

#[test]
fn trace_bound_is_the_integer_square_root_of_4p() {
    for p in (5u64..=1_000_000).step_by(997) {
        let t = trace_bound(p);
        assert!(t * t <= 4 * p && (t + 1) * (t + 1) > 4 * p, "p={p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_forms_split_by_decomposition(k in 1i64..=2_500) {
        // Map k onto a valid discriminant near -4k.
        let d = if (-4 * k).rem_euclid(4) <= 1 { -4 * k } else { -4 * k + 1 };
        let total = reduced_form_count(disc(d));
        let by_parts: u64 = decompose(disc(d))
            .into_iter()
            .map(|(fund, _)| reduced_form_count_primitive(disc(fund)))
            .sum();
        prop_assert_eq!(total, by_parts);
    }

    #[test]
    fn prop_lseries_rounds_to_forms(k in 1i64..=125) {
        let d = -4 * k;
        let forms = kronecker_class_number(disc(d), ClassMode::Forms).unwrap();
        let lseries = kronecker_class_number(disc(d), ClassMode::Lseries).unwrap();
        prop_assert_eq!(forms, lseries);
    }
}
