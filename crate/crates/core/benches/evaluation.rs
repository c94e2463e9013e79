use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use natcode::codes::{alpha, elias_iterate};
use natcode::kraft::assign_codeword;
use natcode::numerics::{log2_one_minus, ComputableReal};
use natcode::{par, Nat};
use num_bigint::BigInt;
use num_rational::BigRational;

fn eval_ranges(c: &mut Criterion) {
    let code = elias_iterate(&alpha(), 2).unwrap();
    let lengths = code.lengths();
    let mut group = c.benchmark_group("eval_range elias^2(alpha) 0..=200000");
    group.bench_function("parallel", |b| {
        b.iter(|| lengths.eval_range(0, black_box(200_000)).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| lengths.eval_range_sequential(0, black_box(200_000)).unwrap())
    });
    group.bench_function("by runs", |b| {
        b.iter(|| lengths.eval_range_by_runs(0, black_box(200_000)).unwrap())
    });
    group.finish();
}

fn codewords(c: &mut Criterion) {
    let code = elias_iterate(&alpha(), 1).unwrap();
    let symbols: Vec<Nat> = (0..4000u64).map(|n| Nat::from(n * 7919)).collect();
    let word = |n: &Nat| assign_codeword(&code, n);
    let mut group = c.benchmark_group("assign_codeword elias(alpha) x4000");
    group.bench_function("parallel", |b| {
        b.iter(|| par::map_items(black_box(&symbols), word).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| par::map_items_sequential(black_box(&symbols), word).unwrap())
    });
    group.finish();
}

fn logarithms(c: &mut Criterion) {
    let xs: Vec<BigRational> = (0..64i64)
        .map(|i| BigRational::new(BigInt::from(i * 97 % 512), BigInt::from(1024)))
        .collect();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let enclose = |x: &BigRational| log2_one_minus(ComputableReal::exact(x.clone()), half.clone())?.approx_u64(1 << 40);
    let mut group = c.benchmark_group("log2_one_minus x64 at 2^40");
    group.bench_function("parallel", |b| {
        b.iter(|| par::map_items(black_box(&xs), enclose).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| par::map_items_sequential(black_box(&xs), enclose).unwrap())
    });
    group.finish();
}

criterion_group!(benches, eval_ranges, codewords, logarithms);
criterion_main!(benches);
