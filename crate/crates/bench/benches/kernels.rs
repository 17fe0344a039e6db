use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use framedist_core::constructors::{harmonic_frame, random_frame_in};
use framedist_core::frame::frame_operator;
use framedist_core::linalg::{hermitian_eigen, rank, Field};
use framedist_core::search::search_product_sum;
use framedist_core::spark::complement_property;
use framedist_core::{Direction, SearchConfig};
use std::hint::black_box;

fn eigen(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermitian_eigen");
    for m in [4, 8, 16] {
        let s = frame_operator(&random_frame_in(Field::Complex, m, 2 * m, 1).unwrap());
        g.bench_with_input(BenchmarkId::from_parameter(m), &s, |b, s| b.iter(|| hermitian_eigen(black_box(s))));
    }
    g.finish();
}

fn rank_svd(c: &mut Criterion) {
    let f = random_frame_in(Field::Complex, 8, 16, 2).unwrap();
    c.bench_function("rank/8x16", |b| b.iter(|| rank(black_box(f.vectors()))));
}

fn complement(c: &mut Criterion) {
    let mut g = c.benchmark_group("complement_property");
    g.sample_size(10);
    for (m, n) in [(3, 8), (4, 12), (5, 16)] {
        let f = random_frame_in(Field::Real, m, n, 3).unwrap();
        g.bench_with_input(BenchmarkId::new("real", format!("{m}x{n}")), &f, |b, f| {
            b.iter(|| complement_property(black_box(f)).unwrap())
        });
    }
    g.finish();
}

fn multistart(c: &mut Criterion) {
    let mut g = c.benchmark_group("search_product_sum");
    g.sample_size(10);
    let f = harmonic_frame(3, 7, false).unwrap();
    for starts in [64, 256] {
        let cfg = SearchConfig::default().with_starts(starts).with_seed(7);
        g.bench_with_input(BenchmarkId::new("harmonic3x7", starts), &cfg, |b, cfg| {
            b.iter(|| search_product_sum(&f, Direction::Max, cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, eigen, rank_svd, complement, multistart);
criterion_main!(benches);
