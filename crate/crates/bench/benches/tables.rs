use criterion::{criterion_group, criterion_main, Criterion};
use hermsim::farima::gamma_coefficients;
use hermsim::meyer::{build_fractional_primitive, build_fractional_scaling, build_phi, TableParams};
use std::hint::black_box;

fn tables(c: &mut Criterion) {
    let params = TableParams::default();
    let mut g = c.benchmark_group("tables");
    g.sample_size(10);
    g.bench_function("phi", |b| b.iter(|| build_phi(black_box(&params)).unwrap()));
    g.bench_function("psi_h 0.7", |b| b.iter(|| build_fractional_primitive(black_box(0.7), &params).unwrap()));
    g.bench_function("Phi_Delta 0.3", |b| b.iter(|| build_fractional_scaling(black_box(0.3), &params).unwrap()));
    g.finish();
    c.bench_function("gamma coefficients P = 2^14", |b| b.iter(|| gamma_coefficients(black_box(0.3), 1 << 14).unwrap()));
}

criterion_group!(benches, tables);
criterion_main!(benches);
