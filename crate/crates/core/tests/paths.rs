use hermsim::field::GaussianField;
use hermsim::meyer::{FunctionTable, TableParams, TableSet};
use hermsim::process::{
    approx_path, detail_coefficient, detail_integral, fbm_path, fullseries_paths, horizon_order, ApproxParams,
    FullSeriesParams,
};
use hermsim::validation::stats::ks_two_sample;
use hermsim::HurstVector;
use proptest::prelude::*;
use std::sync::OnceLock;

fn tables() -> &'static TableSet {
    static T: OnceLock<TableSet> = OnceLock::new();
    T.get_or_init(|| TableSet::new(TableParams::default()))
}

/// Trapezoid rule for `\int f g` on `[-r, r]`, spectrally accurate for these smooth tables.
fn integrate<F: Fn(f64) -> f64>(f: F, r: f64, dx: f64) -> f64 {
    let n = (2.0 * r / dx).round() as i64;
    (0..=n).map(|i| f(-r + i as f64 * dx)).sum::<f64>() * dx
}

#[test]
fn parseval_for_a_band_limited_function() {
    // f = sqrt 2 phi(2x - a) has spectrum inside 8 pi / 3, so it lies in V_0 + W_0 + W_1.
    let t = tables();
    let phi = t.phi().unwrap();
    let psi = t.psi().unwrap();
    let a = 0.3;
    let s2 = 2f64.sqrt();
    let f = |x: f64| s2 * phi.eval(2.0 * x - a);
    let (r, dx) = (24.0, 1.0 / 64.0);
    let norm = integrate(|x| f(x) * f(x), r, dx);
    let mut energy = 0.0;
    for k in -24i64..=24 {
        let kf = k as f64;
        energy += integrate(|x| f(x) * phi.eval(x - kf), r, dx).powi(2);
        energy += integrate(|x| f(x) * psi.eval(x - kf), r, dx).powi(2);
    }
    for k in -40i64..=40 {
        let kf = k as f64;
        energy += integrate(|x| f(x) * s2 * psi.eval(2.0 * x - kf), r, dx).powi(2);
    }
    assert!((norm - 1.0).abs() < 1e-4, "norm {norm}");
    assert!((energy - norm).abs() < 1e-4, "energy {energy} vs {norm}");
}

#[test]
fn detail_coefficient_prefactor() {
    let t = tables();
    let h = HurstVector::new(vec![0.8, 0.85]).unwrap();
    for (j, k, time) in [([0i64, 1i64], [0i64, 2i64], 1.0), ([2, -1], [3, 0], 0.7), ([1, 1], [1, 2], 2.5)] {
        let a = detail_integral(&h, &j, &k, time, t).unwrap();
        let c = detail_coefficient(&h, &j, &k, time, t).unwrap();
        let factor = (j[0] as f64 * 0.2 + j[1] as f64 * 0.15).exp2();
        assert!((c - factor * a).abs() <= 1e-14 * c.abs().max(1e-300), "{c} vs {}", factor * a);
    }
}

#[test]
fn field_windows_are_consistent() {
    let f = GaussianField::new(11, 2).replica(3);
    for level in [0, 2, 4] {
        let wide = f.scaling(level, -40, 60);
        let narrow = f.scaling(level, 5, 17);
        assert_eq!(&wide[45..=57], &narrow[..]);
        let wide = f.detail(level, -300, 300);
        let narrow = f.detail(level, 250, 260);
        assert_eq!(&wide[550..=560], &narrow[..]);
    }
    assert_ne!(f.scaling(2, 0, 8), f.replica(4).scaling(2, 0, 8));
    assert_ne!(f.scaling(2, 0, 8), GaussianField::new(12, 2).replica(3).scaling(2, 0, 8));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn equal_metadata_gives_identical_paths(seed in 0u64..1000, replica in 0u64..50, level in 2i32..5) {
        let h = HurstVector::new(vec![0.8, 0.85]).unwrap();
        let mut p = ApproxParams::new(level, 1.0, 32);
        p.farima_order = horizon_order(16.0, level);
        let f = GaussianField::new(seed, 2).replica(replica);
        let a = approx_path(&h, &p, &f, tables()).unwrap();
        let b = approx_path(&h, &p, &GaussianField::new(seed, 2).replica(replica), tables()).unwrap();
        prop_assert_eq!(&a.meta, &b.meta);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a.values), bits(&b.values));
        prop_assert_eq!(a.values[0], 0.0);
    }
}

#[test]
fn fullseries_and_fbm_agree_in_law_for_d_one() {
    let h = 0.7;
    let hv = HurstVector::new(vec![h]).unwrap();
    let t = tables();
    let n = 1000u64;
    let mut fp = FullSeriesParams::new(6, 2.5, 10);
    fp.gl_order = 8;
    let fields: Vec<GaussianField> = (0..n).map(|r| GaussianField::new(31, 0).replica(r)).collect();
    let full: Vec<f64> = fullseries_paths(&hv, &fp, &fields, t).unwrap().iter().map(|p| p.values[4]).collect();
    let ap = ApproxParams::new(6, 1.0, 4);
    let fbm: Vec<f64> = (0..n)
        .map(|r| fbm_path(h, &ap, &GaussianField::new(32, 6).replica(r), t).unwrap().values[4])
        .collect();
    let ks = ks_two_sample(&full, &fbm).unwrap();
    assert!(ks.p_value > 0.01, "KS statistic {:.4}, p = {:.4}", ks.statistic, ks.p_value);
}

#[test]
fn table_binary_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let t = tables().fractional_scaling(0.3).unwrap();
    let path = dir.path().join("t.bin");
    t.save(&path).unwrap();
    let back = FunctionTable::load(&path).unwrap();
    assert_eq!(back.samples.len(), t.samples.len());
    assert!(back.samples.iter().zip(&t.samples).all(|(a, b)| a.to_bits() == b.to_bits()));
}
