//! Deterministic structural suites: Meyer tables, FARIMA identities,
//! pair-partition combinatorics and the two routes to chaotic variables.

use super::report::{Check, SuiteReport};
use crate::chaos::{
    farima_values, hermite_coefficients_fit, hermite_partition_coeff, mu_partition_route_with, mu_with,
    pair_partitions, sigma, sigma_farima_route, sigma_truncation_tolerance, truncated_covariance,
    wick_partition_route,
};
use crate::error::Result;
use crate::farima::{farima_covariance, gamma_coefficients, gamma_fourier_identity_residual};
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use crate::meyer::profile::{fractional_difference_symbol, phi_hat, INV_SQRT_2PI, PHI_SUPPORT};
use crate::meyer::{FunctionTable, TableSet, TailBound};
use crate::quadrature::{integrate_graded, GaussLegendre, GradedMesh};
use num_complex::Complex64;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use statrs::function::gamma::{gamma, ln_gamma};
use std::f64::consts::PI;

/// Largest magnitude of the Fourier transform of a table outside
/// `[-support, support]`, estimated by FFT of the samples.
pub fn spectral_leakage(table: &FunctionTable, support: f64) -> f64 {
    let n = table.samples.len();
    let m = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = table.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(m, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let mut outside = 0.0f64;
    for (k, v) in buf.iter().enumerate() {
        let kk = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
        let xi = (2.0 * PI * kk / (m as f64 * table.dx)).abs();
        if xi > support * 1.02 {
            outside = outside.max(v.norm());
        }
    }
    outside * table.dx * INV_SQRT_2PI
}

/// Bound on the spectrum of the part of a function cut off by the table,
/// from the certified envelope `c (3 + |x|)^{-L}`.
fn truncation_spectrum_bound(table: &FunctionTable, tail: &TailBound) -> f64 {
    let l = tail.exponent;
    2.0 * tail.constant * (3.0 + table.half_width).powf(1.0 - l) / (l - 1.0) * INV_SQRT_2PI
}

/// Orthonormality, band limits and tail certification of the tables for the
/// Hurst values `hs`.
pub fn meyer_suite(tables: &TableSet, hs: &[f64]) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("meyer", false, 0);
    let phi = tables.phi()?;
    let psi = tables.psi()?;
    let mut pp = 0.0f64;
    let mut fp = 0.0f64;
    let mut ss = 0.0f64;
    for k in -5i64..=5 {
        let delta = if k == 0 { 1.0 } else { 0.0 };
        pp = pp.max((phi.shifted_inner_product(&phi, k)? - delta).abs());
        fp = fp.max(phi.shifted_inner_product(&psi, k)?.abs());
        ss = ss.max((psi.shifted_inner_product(&psi, k)? - delta).abs());
    }
    r.push(Check::bound("<phi, phi(. - k)> = delta_0k, |k| <= 5", pp, 1e-6));
    r.push(Check::bound("<phi, psi(. - k)> = 0, |k| <= 5", fp, 1e-6));
    r.push(Check::bound("<psi, psi(. - k)> = delta_0k, |k| <= 5", ss, 1e-6));

    let mut symbol_out = 0.0f64;
    for i in 0..=2000 {
        let xi = PHI_SUPPORT + 1e-9 + i as f64 * 0.01;
        for &h in hs {
            let v = fractional_difference_symbol(xi, h - 0.5) * phi_hat(xi);
            let w = fractional_difference_symbol(-xi, h - 0.5) * phi_hat(-xi);
            symbol_out = symbol_out.max(v.norm()).max(w.norm());
        }
    }
    r.push(Check::asserted(
        "Fourier transform of Phi_Delta vanishes beyond 4 pi / 3",
        symbol_out == 0.0,
        format!("max |value| on the sampled exterior {symbol_out:.1e}"),
    ));
    for &h in hs {
        let fs = tables.fractional_scaling(h - 0.5)?;
        let leak = spectral_leakage(&fs, PHI_SUPPORT);
        let bound = truncation_spectrum_bound(&fs, &fs.certify(8.0, tables.params.tail_tolerance));
        r.push(Check::asserted(
            &format!("Phi_Delta^({:.3}) table spectrum outside 4 pi / 3 within the truncation bound", h - 0.5),
            leak <= bound,
            format!("{leak:.2e} (bound {bound:.2e})"),
        ));
        let ph = tables.fractional_primitive(h)?;
        for (name, t) in [(format!("psi_h, h = {h}"), &ph), (format!("Phi_Delta^({:.3})", h - 0.5), &fs)] {
            let tb = t.certify(8.0, tables.params.tail_tolerance);
            r.push(Check::asserted(
                &format!("{name}: L = 8 decay certificate"),
                tb.certified,
                format!(
                    "c = {:.3e}, edge {:.2e}, outer {:.2e}, interpolation error {:.1e}",
                    tb.constant, tb.relative_edge, tb.relative_outer, t.interpolation_error
                ),
            ));
        }
    }
    Ok(r)
}

/// `Gamma(x + a) / Gamma(x + b)` for real `x >= 0`.
fn gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    if x < 1000.0 {
        return (ln_gamma(x + a) - ln_gamma(x + b)).exp();
    }
    let b2 = |t: f64| t * t - t + 1.0 / 6.0;
    let b3 = |t: f64| t * t * t - 1.5 * t * t + 0.5 * t;
    let b4 = |t: f64| t.powi(4) - 2.0 * t.powi(3) + t * t - 1.0 / 30.0;
    let s = (a - b) * x.ln() + (b2(a) - b2(b)) / (2.0 * x) - (b3(a) - b3(b)) / (6.0 * x * x)
        + (b4(a) - b4(b)) / (12.0 * x * x * x);
    s.exp()
}

/// `sum_p gamma^a_{p + lag} gamma^b_p` by direct summation up to `order`
/// and an integral for the remainder.
pub fn farima_covariance_series(da: f64, db: f64, lag: i64, order: usize) -> Result<f64> {
    let span = order + lag.unsigned_abs() as usize;
    let ga = gamma_coefficients(da, span)?;
    let gb = gamma_coefficients(db, span)?;
    let get = |g: &crate::farima::GammaCoefficients, p: i64| if p < 0 { 0.0 } else { g.values[p as usize] };
    let mut head = 0.0;
    for p in 0..=order as i64 {
        head += get(&ga, p + lag) * get(&gb, p);
    }
    let coef = |d: f64, x: f64| if d == 0.0 { 0.0 } else { gamma_ratio(x, d, 1.0) / gamma(d) };
    let f = |x: f64| coef(da, x + lag as f64) * coef(db, x);
    let a = order as f64 + 0.5;
    let s = da + db;
    let rule = GaussLegendre::order16();
    let mesh = GradedMesh { levels: 40, ..GradedMesh::new(Some(s.max(0.0)), None, 0.1) };
    let tail = integrate_graded(rule, |u: f64| f(a / u) * a / (u * u), 0.0, 1.0, &mesh);
    Ok(head + tail)
}

pub fn farima_suite() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("farima", false, 0);
    let deltas = [0.05, 0.25, 0.45];
    let mut worst = 0.0f64;
    for &d in &deltas {
        for p in -8..=64 {
            worst = worst.max(gamma_fourier_identity_residual(d, p)?);
        }
    }
    r.push(Check::bound("Fourier coefficients of (1 - e^{i xi})^{-delta} equal gamma_p, p in [-8, 64]", worst, 1e-6));

    let mut worst = 0.0f64;
    for (i, &a) in deltas.iter().enumerate() {
        for &b in &deltas[i..] {
            for lag in [-3i64, 0, 1, 5] {
                let q = farima_covariance(a, b, lag)?;
                let s = farima_covariance_series(a, b, lag, 4096)?;
                worst = worst.max((q - s).abs());
            }
        }
    }
    r.push(Check::bound("covariance quadrature vs coefficient series", worst, 1e-6));

    let mut worst = 0.0f64;
    let p = 10_000usize;
    for &d in &deltas {
        let g = gamma_coefficients(d, p)?.values[p];
        let asym = (p as f64).powf(d - 1.0) / gamma(d);
        worst = worst.max((g / asym - 1.0).abs());
    }
    r.push(Check::bound("gamma_p Gamma(delta) p^{1 - delta} - 1 at p = 10^4", worst, 1e-3));
    Ok(r)
}

fn binomial_count(n: u32, m: u32) -> u128 {
    let f = |k: u32| (1..=k as u128).product::<u128>();
    f(n) / ((1u128 << m) * f(m) * f(n - 2 * m))
}

pub fn combinatorics_suite() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("combinatorics", false, 0);
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for n in 0..=8u32 {
        let fit = hermite_coefficients_fit(n as usize);
        for m in 0..=n / 2 {
            cases += 1;
            let formula = binomial_count(n, m);
            let ground: Vec<usize> = (0..n as usize).collect();
            let enumerated = pair_partitions(&ground, m as usize)?.len() as u128;
            let recursive = hermite_partition_coeff(n as usize, m as usize)?;
            let coeff = fit[(n - 2 * m) as usize].abs().round() as u128;
            if !(formula == enumerated && formula == recursive && formula == coeff) {
                mismatches.push(format!("n = {n}, m = {m}: {formula} {enumerated} {recursive} {coeff}"));
            }
        }
    }
    r.push(Check::asserted(
        "a_m^(n) = |P_m^(n)| = n!/(2^m m! (n-2m)!) = |[x^{n-2m}] H_n|, n <= 8",
        mismatches.is_empty(),
        if mismatches.is_empty() { format!("{cases} cases agree") } else { mismatches.join("; ") },
    ));
    Ok(r)
}

pub struct ChaosRouteConfig {
    pub seed: u64,
    pub mu_cases: usize,
    pub level: i32,
}

impl Default for ChaosRouteConfig {
    fn default() -> Self {
        Self { seed: 2024, mu_cases: 1000, level: 3 }
    }
}

pub fn chaos_route_suite(cfg: &ChaosRouteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("chaos-routes", false, cfg.seed);
    let mut rng = SmallRng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.mu_cases {
        let d = rng.random_range(1..=4usize);
        let k: Vec<i64> = (0..d).map(|_| rng.random_range(-2..=2i64)).collect();
        let g: Vec<f64> = (0..5).map(|_| rng.sample(StandardNormal)).collect();
        let look = |x: i64| g[(x + 2) as usize];
        let a = mu_with(&k, look);
        let b = mu_partition_route_with(&k, look)?;
        let scale = a.abs().max(b.abs()).max(1e-300);
        worst = worst.max((a - b).abs() / scale);
    }
    r.push(Check::bound(&format!("mu vs partition route, {} random cases, d <= 4", cfg.mu_cases), worst, 1e-10));

    let field = GaussianField::new(cfg.seed, cfg.level);
    let cases: [(Vec<f64>, Vec<i64>, [usize; 3]); 3] = [
        (vec![0.8, 0.85], vec![0, 1], [128, 256, 512]),
        (vec![0.75, 0.9], vec![3, 3], [128, 256, 512]),
        (vec![0.9, 0.9, 0.9], vec![0, 2, 1], [16, 32, 64]),
    ];
    for (hv, k, orders) in cases {
        let h = HurstVector::new(hv.clone())?;
        let mut tols = Vec::new();
        let mut ok = true;
        let mut gaps = Vec::new();
        let mut exact_gap = 0.0f64;
        for &p in &orders {
            let a = sigma(cfg.level, &k, &h, &field, p)?;
            let b = sigma_farima_route(cfg.level, &k, &h, &field, p)?;
            let z = farima_values(cfg.level, &k, &h, &field, p)?;
            let gammas: Vec<_> = h.deltas().iter().map(|&dl| gamma_coefficients(dl, p)).collect::<Result<_>>()?;
            let bt = wick_partition_route(&z, |x, y| truncated_covariance(&gammas[x], &gammas[y], k[x] - k[y]), 6)?;
            exact_gap = exact_gap.max((a - bt).abs() / a.abs().max(bt.abs()).max(1.0));
            let tol = sigma_truncation_tolerance(cfg.level, &k, &h, &field, p)?;
            ok &= (a - b).abs() <= tol;
            gaps.push((a - b).abs());
            tols.push(tol);
        }
        r.push(Check::bound(
            &format!("route (a) vs partition route with truncated covariances, h = {hv:?}"),
            exact_gap,
            1e-10,
        ));
        let monotone = tols.windows(2).all(|w| w[1] < w[0]);
        r.push(Check::asserted(
            &format!("sigma routes agree within truncation tolerance, h = {hv:?}, k = {k:?}"),
            ok,
            format!("P = {orders:?}: |a - b| = {}, tolerance = {}", sci(&gaps), sci(&tols)),
        ));
        r.push(Check::asserted(
            &format!("truncation tolerance decreases as P doubles, h = {hv:?}"),
            monotone,
            format!("ratios {:.3?}", tols.windows(2).map(|w| w[1] / w[0]).collect::<Vec<_>>()),
        ));
    }
    Ok(r)
}

pub(crate) fn sci(xs: &[f64]) -> String {
    let v: Vec<String> = xs.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", v.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farima::farima_autocovariance;

    #[test]
    fn gamma_ratio_branches_agree() {
        for (a, b) in [(0.3, 1.0), (0.45, 1.0), (1.05, 1.0)] {
            let x = 999.999;
            let lo = (ln_gamma(x + a) - ln_gamma(x + b)).exp();
            let hi = gamma_ratio(1000.0, a, b) * (1.0 + (a - b) * (x.ln() - 1000f64.ln()));
            assert!((lo / hi - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn series_matches_closed_form() {
        for d in [0.1, 0.3, 0.45] {
            for lag in [0i64, 2, -4] {
                let s = farima_covariance_series(d, d, lag, 2048).unwrap();
                let c = farima_autocovariance(d, lag).unwrap();
                assert!((s - c).abs() < 1e-8, "d = {d}, lag = {lag}: {s} vs {c}");
            }
        }
    }
}
