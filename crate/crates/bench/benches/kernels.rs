use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entangler_bench::{gate, gaussian_matrix, BENCH_DIMS};
use entangler_core::linalg::svd;
use entangler_core::{haar_unitary, max_product_overlap, OptimizerConfig};

fn bench_svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("svd");
    for (rows, cols) in [(2, 2), (3, 4), (4, 4), (12, 12)] {
        let m = gaussian_matrix(rows, cols, 1);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{rows}x{cols}")), &m, |b, m| {
            b.iter(|| svd(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn bench_haar(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_unitary");
    for k in [4, 9, 12, 16] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                haar_unitary(black_box(k), seed)
            })
        });
    }
    group.finish();
}

fn bench_overlap(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_product_overlap");
    group.sample_size(10);
    let cfg = OptimizerConfig::default().with_restarts(16).with_seed(3);
    for (m, n) in BENCH_DIMS {
        let u = gate(m, n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{m}x{n}")), &u, |b, u| {
            b.iter(|| max_product_overlap(black_box(u), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, bench_svd, bench_haar, bench_overlap);
criterion_main!(kernels);
