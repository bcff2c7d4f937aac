//! Scaling of `Var X(t)` in `t`.

use super::report::{Check, SuiteReport};
use super::stats::{jackknife_se, linear_fit};
use crate::error::{Error, Result};
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use crate::meyer::TableSet;
use crate::process::{
    approx_path, fbm_path, fullseries_paths, horizon_order, ApproxParams, FullSeriesParams, Representation,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfSimConfig {
    pub representation: Representation,
    pub level: i32,
    pub times: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
    pub band: i64,
    pub horizon: f64,
    pub groups: usize,
    pub tolerance: f64,
}

impl Default for SelfSimConfig {
    fn default() -> Self {
        Self {
            representation: Representation::Abel,
            level: 6,
            times: vec![0.25, 0.5, 1.0, 2.0],
            replicas: 1000,
            seed: 77,
            band: 16,
            horizon: 64.0,
            groups: 20,
            tolerance: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfSimReport {
    pub h: Vec<f64>,
    pub representation: Representation,
    pub times: Vec<f64>,
    pub variances: Vec<f64>,
    pub slope: f64,
    /// Jackknife standard error of the slope over replica groups.
    pub slope_se: f64,
    /// `2 (sum h - d + 1)`.
    pub expected_slope: f64,
    pub asserted: bool,
    pub passed: bool,
    pub replicas: usize,
    pub config: SelfSimConfig,
}

/// Grid `k * step` on `[0, T]` containing every requested time.
fn grid_for(times: &[f64]) -> Result<(f64, usize, Vec<usize>)> {
    let step = times.iter().fold(f64::INFINITY, |m, &t| m.min(t));
    let t_max = times.iter().fold(0.0f64, |m, &t| m.max(t));
    let mut idx = Vec::new();
    for &t in times {
        let k = (t / step).round();
        if (k * step - t).abs() > 1e-12 * t {
            return Err(Error::Precondition(format!("time {t} is not a multiple of {step}")));
        }
        idx.push(k as usize);
    }
    Ok((t_max, (t_max / step).round() as usize, idx))
}

fn sample(h: &HurstVector, cfg: &SelfSimConfig, tables: &TableSet) -> Result<Vec<Vec<f64>>> {
    let (mut t_max, mut grid_n, idx) = grid_for(&cfg.times)?;
    if cfg.representation == Representation::FullSeries {
        // Index sets need T > 2: extend the grid by whole steps.
        let step = t_max / grid_n as f64;
        while t_max <= 2.0 {
            t_max += step;
            grid_n += 1;
        }
        let base = GaussianField::new(cfg.seed, 0);
        let fields: Vec<GaussianField> = (0..cfg.replicas as u64).map(|r| base.replica(r)).collect();
        let p = FullSeriesParams::new(cfg.level, t_max, grid_n);
        let paths = fullseries_paths(h, &p, &fields, tables)?;
        return Ok(paths.iter().map(|p| idx.iter().map(|&i| p.values[i]).collect()).collect());
    }
    let field = GaussianField::new(cfg.seed, cfg.level);
    let mut params = ApproxParams::new(cfg.level, t_max, grid_n);
    params.band = cfg.band;
    params.farima_order = horizon_order(cfg.horizon, cfg.level);
    (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let f = field.replica(r);
            let path = match cfg.representation {
                Representation::Fbm => {
                    if h.d() != 1 {
                        return Err(Error::Precondition("fbm representation needs d = 1".into()));
                    }
                    fbm_path(h.values()[0], &params, &f, tables)?
                }
                Representation::Abel => approx_path(h, &params, &f, tables)?,
                other => {
                    return Err(Error::Precondition(format!("representation {other:?} not supported here")));
                }
            };
            Ok(idx.iter().map(|&i| path.values[i]).collect())
        })
        .collect()
}

fn log_var_slope(values: &[Vec<f64>], times: &[f64], rows: &[usize]) -> f64 {
    let x: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = (0..times.len())
        .map(|i| (rows.iter().map(|&r| values[r][i] * values[r][i]).sum::<f64>() / rows.len() as f64).ln())
        .collect();
    linear_fit(&x, &y).map(|f| f.slope).unwrap_or(f64::NAN)
}

pub fn selfsimilarity_test(h: &HurstVector, cfg: &SelfSimConfig, tables: &TableSet) -> Result<SelfSimReport> {
    if cfg.times.len() < 2 {
        return Err(Error::Precondition(format!("regression needs at least 2 times, got {}", cfg.times.len())));
    }
    if cfg.times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Precondition("times must be positive".into()));
    }
    let values = sample(h, cfg, tables)?;
    let all: Vec<usize> = (0..values.len()).collect();
    let slope = log_var_slope(&values, &cfg.times, &all);
    let groups = cfg.groups.min(values.len()).max(2);
    let slope_se = jackknife_se(groups, |keep| {
        let rows: Vec<usize> = all.iter().copied().filter(|r| keep.contains(&(r % groups))).collect();
        log_var_slope(&values, &cfg.times, &rows)
    });
    let variances = (0..cfg.times.len())
        .map(|i| values.iter().map(|v| v[i] * v[i]).sum::<f64>() / values.len() as f64)
        .collect();
    let expected = 2.0 * h.self_similarity_exponent();
    let asserted = h.d() == 1;
    let passed = !asserted || (slope - expected).abs() <= cfg.tolerance;
    Ok(SelfSimReport {
        h: h.values().to_vec(),
        representation: cfg.representation,
        times: cfg.times.clone(),
        variances,
        slope,
        slope_se,
        expected_slope: expected,
        asserted,
        passed,
        replicas: values.len(),
        config: cfg.clone(),
    })
}

impl SelfSimReport {
    pub fn check(&self) -> Check {
        let name = format!("log Var X(t) slope, h = {:?}, vs 2H = {:.3}", self.h, self.expected_slope);
        let summary = format!("{:.3} (jackknife SE {:.3})", self.slope, self.slope_se);
        if self.asserted {
            Check::asserted(&name, self.passed, summary)
        } else {
            Check::reported(&name, summary)
        }
    }
}

pub fn selfsim_suite(reports: &[SelfSimReport], quick: bool) -> SuiteReport {
    let mut r = SuiteReport::new("selfsim", quick, reports.first().map_or(0, |x| x.config.seed));
    for rep in reports {
        r.push(rep.check());
    }
    r.details = serde_json::to_value(reports).unwrap_or_default();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meyer::TableParams;

    #[test]
    fn single_time_is_rejected() {
        let tables = TableSet::new(TableParams::default());
        let h = HurstVector::new(vec![0.7]).unwrap();
        let cfg = SelfSimConfig { times: vec![1.0], ..SelfSimConfig::default() };
        assert!(matches!(selfsimilarity_test(&h, &cfg, &tables), Err(Error::Precondition(_))));
    }

    #[test]
    fn grid_covers_times() {
        let (t, n, idx) = grid_for(&[0.25, 0.5, 1.0, 2.0]).unwrap();
        assert_eq!((t, n, idx), (2.0, 8, vec![1, 2, 4, 8]));
        assert!(grid_for(&[0.25, 0.3]).is_err());
    }
}
