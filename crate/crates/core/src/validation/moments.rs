//! Monte Carlo checks of second moments: Hermite orthogonality, the
//! correlation rule for chaotic variables, and the Wiener-isometry oracle for
//! generalized FARIMA variables.

use super::report::{Check, SuiteReport};
use super::stats::mean_se;
use crate::chaos::{correlation, epsilon, hermite, wick_product};
use crate::error::{Error, Result};
use crate::farima::farima_covariance;
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use crate::meyer::profile::phi_hat;
use crate::quadrature::{integrate_graded, GaussLegendre, GradedMesh};
use rand::rngs::SmallRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::json;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct MomentConfig {
    pub seed: u64,
    pub hermite_draws: usize,
    pub epsilon_replicas: usize,
    pub isometry_replicas: usize,
    /// Allowed deviation in standard errors.
    pub z_max: f64,
}

impl Default for MomentConfig {
    fn default() -> Self {
        Self { seed: 7, hermite_draws: 1_000_000, epsilon_replicas: 100_000, isometry_replicas: 100_000, z_max: 5.0 }
    }
}

impl MomentConfig {
    pub fn quick() -> Self {
        Self { hermite_draws: 100_000, epsilon_replicas: 10_000, isometry_replicas: 10_000, ..Self::default() }
    }
}

/// `|mean - target|` in units of the standard error; exact agreement is
/// required when the standard error vanishes.
fn z_score(mean: f64, se: f64, target: f64) -> f64 {
    let gap = (mean - target).abs();
    if se > 0.0 {
        gap / se
    } else if gap <= 1e-12 * target.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn hermite_orthogonality(cfg: &MomentConfig) -> Check {
    let mut rng = SmallRng::seed_from_u64(cfg.seed);
    let n = cfg.hermite_draws;
    let mut products: Vec<Vec<f64>> = (0..25).map(|_| Vec::with_capacity(n)).collect();
    for _ in 0..n {
        let g: f64 = StandardNormal.sample(&mut rng);
        let h: Vec<f64> = (0..=4).map(|m| hermite(m, g)).collect();
        for a in 0..5 {
            for b in 0..5 {
                products[a * 5 + b].push(h[a] * h[b]);
            }
        }
    }
    let mut worst = 0.0f64;
    let mut worst_at = (0, 0);
    for a in 0..5 {
        for b in 0..5 {
            let (m, se) = mean_se(&products[a * 5 + b]);
            let target = if a == b { (1..=a).product::<usize>() as f64 } else { 0.0 };
            let z = z_score(m, se, target);
            if z > worst {
                worst = z;
                worst_at = (a, b);
            }
        }
    }
    Check::asserted(
        &format!("E[H_m H_n] = delta_mn m!, m, n <= 4, {n} draws"),
        worst <= cfg.z_max,
        format!("largest deviation {worst:.2} SE at (m, n) = {worst_at:?}"),
    )
}

type Index = (Vec<i64>, Vec<i64>);

/// Index pairs `((j, k), (r, s))` with their expected correlations.
pub fn epsilon_battery() -> Vec<(Index, Index, f64)> {
    let p = |j: &[i64], k: &[i64]| (j.to_vec(), k.to_vec());
    vec![
        (p(&[0], &[0]), p(&[0], &[0]), 1.0),
        (p(&[0], &[0]), p(&[0], &[1]), 0.0),
        (p(&[0], &[0]), p(&[1], &[0]), 0.0),
        (p(&[0, 0], &[0, 0]), p(&[0, 0], &[0, 0]), 2.0),
        (p(&[0, 0], &[0, 1]), p(&[0, 0], &[1, 0]), 1.0),
        (p(&[0, 1], &[3, 3]), p(&[1, 0], &[3, 3]), 1.0),
        (p(&[0, 0], &[0, 1]), p(&[0, 0], &[0, 2]), 0.0),
        (p(&[0, 0, 0], &[0, 0, 0]), p(&[0, 0, 0], &[0, 0, 0]), 6.0),
        (p(&[0, 0, 0], &[0, 0, 1]), p(&[0, 0, 0], &[1, 0, 0]), 2.0),
        (p(&[0, 0, 0], &[0, 1, 2]), p(&[0, 0, 0], &[2, 1, 0]), 1.0),
        (p(&[0, 0, 0], &[0, 0, 1]), p(&[0, 0, 0], &[0, 1, 1]), 0.0),
        (p(&[2, -1], &[5, -3]), p(&[-1, 2], &[-3, 5]), 1.0),
        (p(&[0, 1], &[0, 0]), p(&[0, 0], &[0, 0]), 0.0),
        (p(&[1, 1], &[2, 2]), p(&[1, 1], &[2, 2]), 2.0),
        (p(&[0], &[0]), p(&[0, 0], &[0, 0]), 0.0),
        (p(&[0, 0], &[0, 0]), p(&[0, 0], &[1, 1]), 0.0),
        (p(&[0, 0, 0], &[1, 1, 1]), p(&[0, 0, 0], &[1, 1, 1]), 6.0),
        (p(&[0, 0], &[4, 7]), p(&[0, 0], &[7, 4]), 1.0),
        (p(&[-2, -2, 0], &[1, 1, 0]), p(&[0, -2, -2], &[0, 1, 1]), 2.0),
        (p(&[3], &[1]), p(&[3], &[1]), 1.0),
    ]
}

pub fn epsilon_correlations(cfg: &MomentConfig) -> Vec<Check> {
    let battery = epsilon_battery();
    let field = GaussianField::new(cfg.seed, 0);
    let n = cfg.epsilon_replicas;
    let mut samples = vec![Vec::with_capacity(n); battery.len()];
    for r in 0..n as u64 {
        let f = field.replica(r);
        for (i, (a, b, _)) in battery.iter().enumerate() {
            samples[i].push(epsilon(&a.0, &a.1, &f) * epsilon(&b.0, &b.1, &f));
        }
    }
    let mut worst = 0.0f64;
    let mut rule_ok = true;
    let mut lines = Vec::new();
    for (i, (a, b, expected)) in battery.iter().enumerate() {
        rule_ok &= correlation((&a.0, &a.1), (&b.0, &b.1)) == *expected;
        let (m, se) = mean_se(&samples[i]);
        let z = z_score(m, se, *expected);
        worst = worst.max(z);
        lines.push(format!("{m:.3}/{expected}"));
    }
    vec![
        Check::asserted(
            "correlation rule reproduces the expected battery values",
            rule_ok,
            format!("{} index pairs", battery.len()),
        ),
        Check::asserted(
            &format!("E[eps eps'] over {n} replicas, {} index pairs", battery.len()),
            worst <= cfg.z_max,
            format!("largest deviation {worst:.2} SE; means {}", lines.join(" ")),
        ),
    ]
}

/// `(1 - e^{i xi})^{-a} conj((1 - e^{i xi})^{-b})` on `0 < |xi| < 2 pi`.
fn symbol_pair(xi: f64, a: f64, b: f64) -> (f64, f64) {
    let modulus = (2.0 * (0.5 * xi).sin().abs()).powf(-(a + b));
    let arg = if xi > 0.0 { 0.5 * (xi - PI) } else { 0.5 * (xi + PI) };
    let phase = -(a - b) * arg;
    (modulus * phase.cos(), modulus * phase.sin())
}

/// `<Phi^{(-a)}(. - m), Phi^{(-b)}>` by Parseval:
/// `\int phi^(xi)^2 (1 - e^{i xi})^{-a} conj((1 - e^{i xi})^{-b}) e^{-i m xi} d xi`.
pub fn phi_minus_inner_product(a: f64, b: f64, m: i64) -> f64 {
    let rule = GaussLegendre::order16();
    let width = (0.25 / (1.0 + m.unsigned_abs() as f64)).min(0.05);
    let f = |xi: f64| {
        let (re, im) = symbol_pair(xi, a, b);
        let (s, c) = ((m as f64) * xi).sin_cos();
        phi_hat(xi).powi(2) * (re * c + im * s)
    };
    let sing = (a + b > 0.0).then_some(a + b);
    let inner = 2.0 * PI / 3.0;
    let outer = 4.0 * PI / 3.0;
    let left = GradedMesh { levels: 30, ..GradedMesh::new(sing, None, width) };
    let right = GradedMesh { levels: 30, ..GradedMesh::new(None, sing, width) };
    let plain = GradedMesh::new(None, None, width);
    integrate_graded(rule, f, 0.0, inner, &left)
        + integrate_graded(rule, f, -inner, 0.0, &right)
        + integrate_graded(rule, f, inner, outer, &plain)
        + integrate_graded(rule, f, -outer, -inner, &plain)
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
fn cholesky(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return Err(Error::Numerical(format!("covariance not positive definite at row {i}")));
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Index pairs `(k, k')` for the isometry check.
pub fn isometry_battery() -> Vec<([i64; 2], [i64; 2])> {
    vec![
        ([0, 0], [0, 0]),
        ([0, 1], [0, 1]),
        ([0, 1], [1, 0]),
        ([2, 2], [0, 0]),
        ([0, 3], [1, 2]),
        ([1, 4], [4, 1]),
        ([0, 0], [3, 3]),
        ([1, 2], [2, 4]),
    ]
}

/// `E[sigma_k sigma_k']` for `d = 2` as a sum over the two pairings of
/// products of inner products of `Phi^{(-delta)}` translates.
pub fn isometry_oracle(deltas: [f64; 2], k: [i64; 2], kp: [i64; 2]) -> f64 {
    let ip = |a: usize, b: usize| phi_minus_inner_product(deltas[a], deltas[b], k[a] - kp[b]);
    ip(0, 0) * ip(1, 1) + ip(0, 1) * ip(1, 0)
}

pub fn isometry_checks(h: &HurstVector, cfg: &MomentConfig) -> Result<(Vec<Check>, serde_json::Value)> {
    if h.d() != 2 {
        return Err(Error::Precondition(format!("isometry check implemented for d = 2, got d = {}", h.d())));
    }
    let deltas = h.deltas();
    let dl = [deltas[0], deltas[1]];
    let width = 5usize;
    let mut worst_ip = 0.0f64;
    for a in 0..2 {
        for b in 0..2 {
            for m in -4i64..=4 {
                let gap = (phi_minus_inner_product(dl[a], dl[b], m) - farima_covariance(dl[a], dl[b], m)?).abs();
                worst_ip = worst_ip.max(gap);
            }
        }
    }

    let dim = 2 * width;
    let var = |i: usize| (i / width, (i % width) as i64);
    let mut cov = vec![vec![0.0; dim]; dim];
    for (i, row) in cov.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let ((a, ka), (b, kb)) = (var(i), var(j));
            *c = farima_covariance(dl[a], dl[b], ka - kb)?;
        }
    }
    let l = cholesky(&cov)?;
    let battery = isometry_battery();
    let mut rng = SmallRng::seed_from_u64(cfg.seed ^ 0x5eed);
    let n = cfg.isometry_replicas;
    let mut samples = vec![Vec::with_capacity(n); battery.len()];
    let mut z = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    for _ in 0..n {
        for x in g.iter_mut() {
            *x = StandardNormal.sample(&mut rng);
        }
        for i in 0..dim {
            z[i] = (0..=i).map(|j| l[i][j] * g[j]).sum();
        }
        let sigma = |k: [i64; 2]| {
            let idx = [k[0] as usize, width + k[1] as usize];
            wick_product(&[z[idx[0]], z[idx[1]]], |_, _| cov[idx[0]][idx[1]])
        };
        for (s, (k, kp)) in samples.iter_mut().zip(&battery) {
            s.push(sigma(*k) * sigma(*kp));
        }
    }
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for ((k, kp), s) in battery.iter().zip(&samples) {
        let (m, se) = mean_se(s);
        let target = isometry_oracle(dl, *k, *kp);
        let zs = z_score(m, se, target);
        worst = worst.max(zs);
        rows.push(json!({"k": k, "k_prime": kp, "mc_mean": m, "se": se, "oracle": target, "z": zs}));
    }
    let checks = vec![
        Check::bound("Parseval inner products of Phi^(-delta) translates vs FARIMA covariances", worst_ip, 1e-8),
        Check::asserted(
            &format!("E[sigma_k sigma_k'] vs isometry oracle, d = 2, {n} replicas, {} pairs", battery.len()),
            worst <= cfg.z_max,
            format!("largest deviation {worst:.2} SE"),
        ),
    ];
    Ok((checks, json!(rows)))
}

pub fn moments_suite(h: &HurstVector, cfg: &MomentConfig, quick: bool) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("moments", quick, cfg.seed);
    r.push(hermite_orthogonality(cfg));
    for c in epsilon_correlations(cfg) {
        r.push(c);
    }
    let (checks, details) = isometry_checks(h, cfg)?;
    for c in checks {
        r.push(c);
    }
    r.details = json!({ "isometry": details, "h": h.values() });
    Ok(r)
}
