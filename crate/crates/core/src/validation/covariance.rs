//! Covariance of the fractional Brownian motion representation against the
//! functional form `c/2 (t^{2h} + s^{2h} - |t - s|^{2h})`.

use super::report::{Check, SuiteReport};
use super::stats::{linear_fit, mean_se};
use crate::error::{Error, Result};
use crate::field::GaussianField;
use crate::meyer::TableSet;
use crate::process::{fbm_path, ApproxParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceConfig {
    pub level: i32,
    pub t_max: f64,
    /// Grid points `t_i = i T / grid_n`, `i = 0..=grid_n`.
    pub grid_n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub farima_order: usize,
    pub band: i64,
    pub z_max: f64,
    pub slope_tolerance: f64,
}

impl Default for CovarianceConfig {
    fn default() -> Self {
        Self {
            level: 6,
            t_max: 1.0,
            grid_n: 4,
            replicas: 10_000,
            seed: 99,
            farima_order: 1 << 14,
            band: 16,
            z_max: 3.0,
            slope_tolerance: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceCell {
    pub t: f64,
    pub s: f64,
    pub empirical: f64,
    pub se: f64,
    pub fitted: f64,
    /// `(empirical - fitted) / se`; zero on cells with vanishing SE.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub h: f64,
    pub cells: Vec<CovarianceCell>,
    pub fitted_c: f64,
    /// `1 / (Gamma(2h + 1) sin(pi h))`, the variance at `t = 1` of the
    /// normalization used by the representation.
    pub reference_c: f64,
    pub max_abs_z: f64,
    /// Largest `|empirical|` on cells with `t = 0` or `s = 0`.
    pub zero_cells: f64,
    pub diagonal_slope: f64,
    pub diagonal_slope_se: f64,
    pub replicas: usize,
    pub config: CovarianceConfig,
    pub passed: bool,
}

fn shape(h: f64, t: f64, s: f64) -> f64 {
    0.5 * (t.powf(2.0 * h) + s.powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
}

pub fn fbm_covariance_test(h: f64, cfg: &CovarianceConfig, tables: &TableSet) -> Result<CovarianceReport> {
    if cfg.grid_n < 2 {
        return Err(Error::Precondition("covariance grid needs at least three points".into()));
    }
    let field = GaussianField::new(cfg.seed, cfg.level);
    let mut params = ApproxParams::new(cfg.level, cfg.t_max, cfg.grid_n);
    params.farima_order = cfg.farima_order;
    params.band = cfg.band;
    let paths: Vec<Vec<f64>> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| fbm_path(h, &params, &field.replica(r), tables).map(|p| p.values))
        .collect::<Result<_>>()?;
    let times: Vec<f64> = (0..=cfg.grid_n).map(|i| cfg.t_max * i as f64 / cfg.grid_n as f64).collect();
    let n = times.len();

    let mut raw = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let prod: Vec<f64> = paths.iter().map(|p| p[a] * p[b]).collect();
            let (m, se) = mean_se(&prod);
            raw.push((times[a], times[b], m, se));
        }
    }
    let (mut num, mut den) = (0.0, 0.0);
    for &(t, s, m, se) in &raw {
        if se > 0.0 {
            let r = shape(h, t, s);
            num += r * m / (se * se);
            den += r * r / (se * se);
        }
    }
    let c = num / den;
    let mut max_z = 0.0f64;
    let mut zero_cells = 0.0f64;
    let cells: Vec<CovarianceCell> = raw
        .iter()
        .map(|&(t, s, m, se)| {
            let fitted = c * shape(h, t, s);
            let z = if se > 0.0 { (m - fitted) / se } else { 0.0 };
            if t == 0.0 || s == 0.0 {
                zero_cells = zero_cells.max(m.abs());
            }
            max_z = max_z.max(z.abs());
            CovarianceCell { t, s, empirical: m, se, fitted, z }
        })
        .collect();

    let diag: Vec<(f64, f64)> = (1..n).map(|a| (times[a].ln(), raw[a * n + a].2.ln())).collect();
    let fit = linear_fit(&diag.iter().map(|p| p.0).collect::<Vec<_>>(), &diag.iter().map(|p| p.1).collect::<Vec<_>>())?;
    let passed = max_z <= cfg.z_max && zero_cells == 0.0 && (fit.slope - 2.0 * h).abs() <= cfg.slope_tolerance;
    Ok(CovarianceReport {
        h,
        cells,
        fitted_c: c,
        reference_c: 1.0 / (gamma(2.0 * h + 1.0) * (PI * h).sin()),
        max_abs_z: max_z,
        zero_cells,
        diagonal_slope: fit.slope,
        diagonal_slope_se: fit.slope_se,
        replicas: cfg.replicas,
        config: cfg.clone(),
        passed,
    })
}

impl CovarianceReport {
    pub fn suite(&self, quick: bool) -> SuiteReport {
        let mut r = SuiteReport::new("covariance", quick, self.config.seed);
        let k = self.config.grid_n + 1;
        r.push(Check::asserted(
            &format!("one-scalar fit of the {k}x{k} covariance within {} SE", self.config.z_max),
            self.max_abs_z <= self.config.z_max,
            format!("max |z| = {:.2}, fitted c = {:.4}", self.max_abs_z, self.fitted_c),
        ));
        r.push(Check::asserted(
            "covariance vanishes at t = 0",
            self.zero_cells == 0.0,
            format!("max |value| {:.1e}", self.zero_cells),
        ));
        r.push(Check::asserted(
            &format!("diagonal log-log slope 2h = {:.2} within {}", 2.0 * self.h, self.config.slope_tolerance),
            (self.diagonal_slope - 2.0 * self.h).abs() <= self.config.slope_tolerance,
            format!("{:.3} (SE {:.3})", self.diagonal_slope, self.diagonal_slope_se),
        ));
        r.push(Check::reported(
            "fitted c vs 1/(Gamma(2h+1) sin(pi h))",
            format!("{:.4} vs {:.4}", self.fitted_c, self.reference_c),
        ));
        r.details = serde_json::to_value(self).unwrap_or_default();
        r
    }
}
