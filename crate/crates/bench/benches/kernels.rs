//! Criterion benchmarks for the hot kernels: sieving, symbols, class
//! numbers by both routes, traces by both backends, the Euler constants,
//! and a small family sweep.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use stav_bench::bench_pool;
use stav_core::curves::{trace_bsgs, trace_naive, Backend, CurveParams};
use stav_core::lconstants::k_r;
use stav_core::numthy::primes::PrimeTable;
use stav_core::numthy::symbols::jacobi;
use stav_core::quadforms::{kronecker_class_number, ClassMode, Discriminant};
use stav_core::satotate::{family_sweep, BoxSpec, FamilyPath, IntervalSpec};

fn bench_sieve(c: &mut Criterion) {
    c.bench_function("sieve_1e6", |b| {
        b.iter(|| PrimeTable::sieve(black_box(1_000_000)).unwrap())
    });
}

fn bench_jacobi(c: &mut Criterion) {
    c.bench_function("jacobi_batch", |b| {
        b.iter(|| {
            let mut acc = 0i64;
            for a in 1..2000i64 {
                acc += jacobi(black_box(a), 1_000_003).unwrap() as i64;
            }
            acc
        })
    });
}

fn bench_class_numbers(c: &mut Criterion) {
    let d = Discriminant::new(-39999).unwrap();
    let mut g = c.benchmark_group("class_number");
    g.bench_function("forms", |b| {
        b.iter(|| kronecker_class_number(black_box(d), ClassMode::Forms).unwrap())
    });
    g.bench_function("lseries", |b| {
        b.iter(|| kronecker_class_number(black_box(d), ClassMode::Lseries).unwrap())
    });
    g.finish();
}

fn bench_trace(c: &mut Criterion) {
    let e = CurveParams::new(2, 3);
    let p = 10_007;
    let mut g = c.benchmark_group("trace");
    g.bench_function("naive", |b| b.iter(|| trace_naive(black_box(e), p).unwrap()));
    g.bench_function("bsgs", |b| b.iter(|| trace_bsgs(black_box(e), p).unwrap()));
    g.finish();
}

fn bench_k_r(c: &mut Criterion) {
    c.bench_function("k_r_1e5", |b| b.iter(|| k_r(black_box(1), 100_000).unwrap()));
}

fn bench_family_sweep(c: &mut Criterion) {
    let pool = bench_pool();
    let bx = BoxSpec::new(8, 8).unwrap();
    let iv = IntervalSpec::new(0.2, 0.8).unwrap();
    c.bench_function("family_sweep_x200", |b| {
        b.iter(|| {
            family_sweep(
                &pool,
                black_box(&bx),
                &iv,
                200.0,
                FamilyPath::PerCurve,
                Backend::Auto,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_sieve,
    bench_jacobi,
    bench_class_numbers,
    bench_trace,
    bench_k_r,
    bench_family_sweep
);
criterion_main!(benches);
