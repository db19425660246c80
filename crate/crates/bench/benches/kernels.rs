use apostol_bench::{default_set, fixtures};
use apostol_core::{
    ab_poly_scaled, duplication_check, error_certificate, fourier_coefficient_quadrature, partial_sum,
    quotient_sequence, tail_constant,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("ab_poly_scaled");
    for f in fixtures(128) {
        for n in [20usize, 60, 120] {
            g.bench_with_input(BenchmarkId::new(f.name, n), &n, |b, &n| {
                b.iter(|| ab_poly_scaled(&f.ctx, &f.z, n, &f.prec).unwrap())
            });
        }
    }
    g.finish();
}

fn approximation(c: &mut Criterion) {
    let mut g = c.benchmark_group("pole_sum");
    for f in fixtures(128) {
        let set = default_set(&f, 4);
        g.bench_function(BenchmarkId::new("partial_sum", f.name), |b| {
            b.iter(|| partial_sum(&f.ctx, &set, &f.z, 40).unwrap())
        });
        g.bench_function(BenchmarkId::new("tail_constant", f.name), |b| {
            b.iter(|| tail_constant(&f.ctx, &set).unwrap())
        });
        g.bench_function(BenchmarkId::new("certificate", f.name), |b| {
            b.iter(|| error_certificate(&f.ctx, &set, &f.z, 40).unwrap())
        });
    }
    g.finish();
}

fn sequences(c: &mut Criterion) {
    let mut g = c.benchmark_group("sequences");
    g.sample_size(20);
    for f in fixtures(128).into_iter().filter(|f| f.name != "one") {
        g.bench_function(BenchmarkId::new("quotients_10_60", f.name), |b| {
            b.iter(|| quotient_sequence(&f.ctx, &f.z, 10, 60, &f.prec).unwrap())
        });
        g.bench_function(BenchmarkId::new("duplication_30", f.name), |b| {
            b.iter(|| duplication_check(&f.ctx, &f.z, 30, &f.prec).unwrap())
        });
    }
    let three = fixtures(128).into_iter().find(|f| f.name == "three").unwrap();
    g.bench_function("fourier_quadrature_n4_k1", |b| {
        b.iter(|| fourier_coefficient_quadrature(&three.ctx, 4, 1, &three.prec).unwrap())
    });
    g.finish();
}

criterion_group!(benches, exact, approximation, sequences);
criterion_main!(benches);
