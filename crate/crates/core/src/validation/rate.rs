//! Convergence-rate regressions on successive sup-norm differences.

use super::report::{Check, SuiteReport};
use super::stats::{linear_fit, median};
use crate::error::{Error, Result};
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use crate::meyer::TableSet;
use crate::process::{
    approx_path, fullseries_paths, horizon_order, sup_distance, ApproxParams, FullSeriesParams, SamplePath,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Minimal number of successive differences in a regression.
pub const MIN_LEVELS: usize = 4;
pub const MIN_REPLICAS: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub representation: String,
    pub h: Vec<f64>,
    /// Level `J` (or `N`) of each difference `X_{J+1} - X_J`.
    pub levels: Vec<i32>,
    /// Median sup-norm differences over replicas.
    pub errors: Vec<f64>,
    /// `log2(errors / J^{d/2})`, or `log2(errors)` without the correction.
    pub regressed: Vec<f64>,
    pub fitted_slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_se: f64,
    /// `-(sum h - d + 1/2)`.
    pub theory_slope: f64,
    /// `-(sum h - d + 1)`, the self-similarity exponent.
    pub hypothesis_slope: f64,
    pub tolerance: f64,
    pub poly_correction: bool,
    pub replicas: usize,
    pub seed: u64,
    /// `|fitted - theory| <= tolerance`.
    pub within_tolerance: bool,
    /// `fitted <= theory + tolerance`: decay at least as fast as the bound.
    pub within_bound: bool,
    /// Median differences strictly decrease with the level.
    pub monotone: bool,
}

impl RateReport {
    fn from_errors(
        representation: &str,
        h: &HurstVector,
        levels: Vec<i32>,
        per_replica: Vec<Vec<f64>>,
        tolerance: f64,
        poly_correction: bool,
        seed: u64,
    ) -> Result<Self> {
        let d = h.d() as f64;
        let errors: Vec<f64> = (0..levels.len())
            .map(|i| median(&per_replica.iter().map(|r| r[i]).collect::<Vec<_>>()))
            .collect();
        let regressed: Vec<f64> = levels
            .iter()
            .zip(&errors)
            .map(|(&j, &e)| {
                let norm = if poly_correction { (j.max(1) as f64).powf(0.5 * d) } else { 1.0 };
                (e / norm).log2()
            })
            .collect();
        let x: Vec<f64> = levels.iter().map(|&j| j as f64).collect();
        let fit = linear_fit(&x, &regressed)?;
        let theory = -(h.sum() - d + 0.5);
        Ok(Self {
            representation: representation.into(),
            h: h.values().to_vec(),
            levels,
            regressed,
            fitted_slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            slope_se: fit.slope_se,
            theory_slope: theory,
            hypothesis_slope: -(h.sum() - d + 1.0),
            tolerance,
            poly_correction,
            replicas: per_replica.len(),
            seed,
            within_tolerance: (fit.slope - theory).abs() <= tolerance,
            within_bound: fit.slope <= theory + tolerance,
            monotone: errors.windows(2).all(|w| w[1] < w[0]),
            errors,
        })
    }

    pub fn checks(&self) -> Vec<Check> {
        let tag = format!("{} h = {:?}", self.representation, self.h);
        vec![
            Check::asserted(
                &format!("{tag}: fitted slope within {} of {:.3}", self.tolerance, self.theory_slope),
                self.within_tolerance,
                format!(
                    "fitted {:.3} (SE {:.3}, R^2 {:.3}), |fitted - theory| = {:.3}",
                    self.fitted_slope,
                    self.slope_se,
                    self.r_squared,
                    (self.fitted_slope - self.theory_slope).abs()
                ),
            ),
            Check::asserted(
                &format!("{tag}: median differences decrease with the level"),
                self.monotone,
                super::identities::sci(&self.errors),
            ),
            Check::reported(
                &format!("{tag}: decay at least as fast as the bound"),
                format!(
                    "{} (fitted {:.3} <= {:.3})",
                    if self.within_bound { "yes" } else { "no" },
                    self.fitted_slope,
                    self.theory_slope + self.tolerance
                ),
            ),
            Check::reported(
                &format!("{tag}: distance to -(sum h - d + 1) = {:.3}", self.hypothesis_slope),
                format!("{:.3}", (self.fitted_slope - self.hypothesis_slope).abs()),
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateConfig {
    /// Path levels `lo..=hi`; differences are taken at `lo..hi`.
    pub levels: (i32, i32),
    pub replicas: usize,
    pub seed: u64,
    pub t_max: f64,
    pub grid_n: usize,
    pub band: i64,
    pub base_level: i32,
    /// FARIMA truncation per unit of physical time.
    pub horizon: f64,
    pub tolerance: f64,
    pub poly_correction: bool,
}

impl Default for RateConfig {
    fn default() -> Self {
        Self {
            levels: (2, 7),
            replicas: 64,
            seed: 2023,
            t_max: 1.0,
            grid_n: 256,
            band: 16,
            base_level: 2,
            horizon: 64.0,
            tolerance: 0.15,
            poly_correction: true,
        }
    }
}

fn check_sizes(levels: (i32, i32), replicas: usize) -> Result<Vec<i32>> {
    let count = (levels.1 - levels.0).max(0) as usize;
    if count < MIN_LEVELS {
        return Err(Error::InsufficientLevels(format!(
            "{count} difference levels from [{}, {}], need at least {MIN_LEVELS}",
            levels.0, levels.1
        )));
    }
    if replicas < MIN_REPLICAS {
        return Err(Error::InsufficientLevels(format!("{replicas} replicas, need at least {MIN_REPLICAS}")));
    }
    Ok((levels.0..levels.1).collect())
}

/// Successive differences of the scaling-function approximation.
pub fn rate_test(h: &HurstVector, cfg: &RateConfig, tables: &TableSet) -> Result<RateReport> {
    let diff_levels = check_sizes(cfg.levels, cfg.replicas)?;
    if cfg.levels.0 < cfg.base_level {
        return Err(Error::Precondition(format!(
            "lowest level {} below the field base level {}",
            cfg.levels.0, cfg.base_level
        )));
    }
    let field = GaussianField::new(cfg.seed, cfg.base_level);
    let per_replica: Vec<Vec<f64>> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>> {
            let f = field.replica(r);
            let mut prev: Option<SamplePath> = None;
            let mut diffs = Vec::with_capacity(diff_levels.len());
            for j in cfg.levels.0..=cfg.levels.1 {
                let mut p = ApproxParams::new(j, cfg.t_max, cfg.grid_n);
                p.band = cfg.band;
                p.farima_order = horizon_order(cfg.horizon, j);
                let path = approx_path(h, &p, &f, tables)?;
                if let Some(pv) = &prev {
                    diffs.push(sup_distance(&pv.values, &path.values));
                }
                prev = Some(path);
            }
            Ok(diffs)
        })
        .collect::<Result<_>>()?;
    RateReport::from_errors("approx", h, diff_levels, per_replica, cfg.tolerance, cfg.poly_correction, cfg.seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullRateConfig {
    /// Truncation levels `lo..=hi`; differences are taken at `lo..hi`.
    pub levels: (i32, i32),
    pub replicas: usize,
    pub seed: u64,
    pub t_max: f64,
    pub grid_n: usize,
    pub b: f64,
    pub b_prime: f64,
    pub g: f64,
    pub tolerance: f64,
    pub poly_correction: bool,
}

impl Default for FullRateConfig {
    fn default() -> Self {
        Self {
            levels: (2, 6),
            replicas: 64,
            seed: 2025,
            t_max: 2.5,
            grid_n: 64,
            b: 1.0,
            b_prime: 1.0,
            g: 1.0,
            tolerance: 0.2,
            poly_correction: true,
        }
    }
}

/// Successive differences of the truncated wavelet series.
pub fn fullseries_rate_test(h: &HurstVector, cfg: &FullRateConfig, tables: &TableSet) -> Result<RateReport> {
    let diff_levels = check_sizes(cfg.levels, cfg.replicas)?;
    let base = GaussianField::new(cfg.seed, 0);
    let fields: Vec<GaussianField> = (0..cfg.replicas as u64).map(|r| base.replica(r)).collect();
    let mut per_replica = vec![Vec::with_capacity(diff_levels.len()); cfg.replicas];
    let mut prev: Option<Vec<SamplePath>> = None;
    for n in cfg.levels.0..=cfg.levels.1 {
        let mut p = FullSeriesParams::new(n, cfg.t_max, cfg.grid_n);
        p.b = cfg.b;
        p.b_prime = cfg.b_prime;
        p.g = cfg.g;
        let paths = fullseries_paths(h, &p, &fields, tables)?;
        if let Some(pv) = &prev {
            for (acc, (a, b)) in per_replica.iter_mut().zip(pv.iter().zip(&paths)) {
                acc.push(sup_distance(&a.values, &b.values));
            }
        }
        prev = Some(paths);
    }
    RateReport::from_errors("fullseries", h, diff_levels, per_replica, cfg.tolerance, cfg.poly_correction, cfg.seed)
}

pub fn rate_suite(name: &str, reports: &[RateReport], quick: bool) -> SuiteReport {
    let mut r = SuiteReport::new(name, quick, reports.first().map_or(0, |x| x.seed));
    for rep in reports {
        for c in rep.checks() {
            r.push(c);
        }
    }
    r.details = serde_json::to_value(reports).unwrap_or_default();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meyer::TableParams;

    #[test]
    fn too_few_levels_or_replicas() {
        let tables = TableSet::new(TableParams::default());
        let h = HurstVector::new(vec![0.7]).unwrap();
        let cfg = RateConfig { levels: (2, 5), ..RateConfig::default() };
        assert!(matches!(rate_test(&h, &cfg, &tables), Err(Error::InsufficientLevels(_))));
        let cfg = RateConfig { replicas: 8, ..RateConfig::default() };
        assert!(matches!(rate_test(&h, &cfg, &tables), Err(Error::InsufficientLevels(_))));
        let cfg = FullRateConfig { levels: (2, 3), ..FullRateConfig::default() };
        assert!(matches!(fullseries_rate_test(&h, &cfg, &tables), Err(Error::InsufficientLevels(_))));
    }

    #[test]
    fn theory_slopes() {
        let one = |h: Vec<f64>| {
            let h = HurstVector::new(h).unwrap();
            let per: Vec<Vec<f64>> = (0..32).map(|_| vec![1.0, 0.5, 0.25, 0.125]).collect();
            RateReport::from_errors("t", &h, vec![2, 3, 4, 5], per, 0.15, false, 0).unwrap()
        };
        let r = one(vec![0.7]);
        assert!((r.theory_slope + 0.2).abs() < 1e-12);
        assert!((r.fitted_slope + 1.0).abs() < 1e-12);
        assert!(!r.within_tolerance && r.within_bound);
        let r = one(vec![0.8, 0.85]);
        assert!((r.theory_slope + 0.15).abs() < 1e-12);
        assert!((r.hypothesis_slope + 0.65).abs() < 1e-12);
        let r = one(vec![0.9, 0.9, 0.9]);
        assert!((r.theory_slope + 0.2).abs() < 1e-12);
    }
}
