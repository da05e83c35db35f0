use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tricover_bench::worked_cover;
use tricover_core::ecurve::{count_points, enumerate_classes};
use tricover_core::zeta::count_cover;
use tricover_core::{make_field, EllipticModel};

fn cover_counts(c: &mut Criterion) {
    let cover = worked_cover();
    let mut g = c.benchmark_group("count_cover_q13");
    g.sample_size(10);
    for k in [3, 4, 5] {
        g.bench_function(format!("k{k}"), |b| b.iter(|| count_cover(black_box(&cover), k).unwrap()));
    }
    g.finish();
}

fn curve_counts(c: &mut Criterion) {
    let k = make_field(13, 1).unwrap();
    let e = EllipticModel::legendre(k.clone(), &k.from_int(3)).unwrap();
    c.bench_function("count_points_q13_k4", |b| b.iter(|| count_points(black_box(&e), 4).unwrap()));
}

fn classes(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_classes");
    g.sample_size(10);
    for q in [13u64, 49] {
        g.bench_function(format!("q{q}"), |b| b.iter(|| enumerate_classes(black_box(q)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, cover_counts, curve_counts, classes);
criterion_main!(benches);
