use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hermsim::chaos::sigma_window;
use hermsim::chaos::SigmaRoute;
use hermsim::field::GaussianField;
use hermsim::process::{approx_path, fbm_path, fullseries_path, horizon_order, ApproxParams, FullSeriesParams};
use hermsim_bench::{hurst, warm_tables};
use std::hint::black_box;

fn paths(c: &mut Criterion) {
    let tables = warm_tables(&[&[0.7], &[0.8, 0.85]]);
    let mut g = c.benchmark_group("approx path");
    g.sample_size(10);
    for level in [4, 6] {
        let h = hurst(&[0.8, 0.85]);
        let mut p = ApproxParams::new(level, 1.0, 256);
        p.farima_order = horizon_order(64.0, level);
        let f = GaussianField::new(1, 2);
        g.bench_with_input(BenchmarkId::new("d = 2", level), &level, |b, _| {
            b.iter(|| approx_path(&h, &p, black_box(&f), &tables).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("other paths");
    g.sample_size(10);
    let p = ApproxParams::new(6, 1.0, 256);
    g.bench_function("fbm J = 6", |b| b.iter(|| fbm_path(0.7, &p, black_box(&GaussianField::new(1, 6)), &tables).unwrap()));
    let h = hurst(&[0.8, 0.85]);
    let fp = FullSeriesParams::new(3, 2.5, 32);
    g.bench_function("full series d = 2, N = 3", |b| {
        b.iter(|| fullseries_path(&h, &fp, black_box(&GaussianField::new(1, 0)), &tables).unwrap())
    });
    g.bench_function("sigma window 8x8", |b| {
        b.iter(|| sigma_window(3, &h, 0, 7, black_box(&GaussianField::new(1, 3)), 256, SigmaRoute::Truncated).unwrap())
    });
    g.finish();
}

criterion_group!(benches, paths);
criterion_main!(benches);
