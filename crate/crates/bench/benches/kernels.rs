use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qtd_core::specfun::{bessel_j, elliptic_k, BesselOrder};

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_j");
    // series branch, then the Miller recurrence
    for x in [0.556, 8.0, 40.0, 900.0] {
        for n in [0u32, 1, 20] {
            let order = BesselOrder::new(n).unwrap();
            g.bench_with_input(BenchmarkId::new(format!("n{n}"), x), &x, |b, &x| {
                b.iter(|| bessel_j(order, black_box(x)))
            });
        }
    }
    g.finish();
}

fn elliptic(c: &mut Criterion) {
    let mut g = c.benchmark_group("elliptic_k");
    for k in [0.0, 0.3636, 0.99, 1.0 - 1e-12] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| elliptic_k(black_box(k))));
    }
    g.finish();
}

criterion_group!(benches, bessel, elliptic);
criterion_main!(benches);
