//! Resolved run configuration: command-line flag > config file > default.

use anyhow::{bail, Result};
use hermsim::meyer::TableParams;
use hermsim::HurstVector;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Rep {
    /// Scaling-function approximation assembled through partial sums.
    Approx,
    /// Scaling-function approximation by direct time quadrature.
    Direct,
    /// Truncated wavelet series.
    Fullseries,
    /// Low-frequency part of fractional Brownian motion (d = 1).
    Fbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Truncated,
    Farima,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub h: Option<Vec<f64>>,
    pub d: Option<usize>,
    pub representation: Rep,
    pub level: i32,
    pub t_max: f64,
    pub grid_n: usize,
    pub seed: Option<u64>,
    pub replica: u64,
    pub band: i64,
    pub q_range: Option<(i64, i64)>,
    pub b: f64,
    pub b_prime: f64,
    pub g: f64,
    pub farima_order: Option<usize>,
    pub horizon: f64,
    pub base_level: Option<i32>,
    pub quad_nodes: usize,
    pub gl_order: usize,
    pub table_half_width: f64,
    pub table_dx: f64,
    pub suite: String,
    pub quick: bool,
    pub replicas: Option<usize>,
    pub k_lo: i64,
    pub k_hi: i64,
    pub route: Route,
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = TableParams::default();
        Self {
            h: None,
            d: None,
            representation: Rep::Approx,
            level: 5,
            t_max: 1.0,
            grid_n: 256,
            seed: None,
            replica: 0,
            band: 16,
            q_range: None,
            b: 1.0,
            b_prime: 1.0,
            g: 1.0,
            farima_order: None,
            horizon: hermsim::process::DEFAULT_HORIZON,
            base_level: None,
            quad_nodes: 4,
            gl_order: 8,
            table_half_width: t.half_width,
            table_dx: t.dx,
            suite: "all".into(),
            quick: false,
            replicas: None,
            k_lo: 0,
            k_hi: 7,
            route: Route::Truncated,
            out: None,
            threads: None,
        }
    }
}

/// Marker for errors that map to the configuration exit code.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| config_error(format!("config {}: {e}", path.display())))
    }

    pub const DEFAULT_SEED: u64 = 1;

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(Self::DEFAULT_SEED)
    }

    /// Hurst vector from `h` and `d`; a single `h` with `d > 1` is repeated.
    pub fn hurst_values(&self) -> Result<Option<Vec<f64>>> {
        let Some(h) = &self.h else {
            return match self.d {
                None | Some(1) => Ok(None),
                Some(d) => Err(config_error(format!("--d {d} given without --h"))),
            };
        };
        let h = match self.d {
            Some(d) if h.len() == 1 && d > 1 => vec![h[0]; d],
            Some(d) if h.len() != d => {
                return Err(config_error(format!("--d {d} but {} Hurst values given", h.len())));
            }
            _ => h.clone(),
        };
        Ok(Some(h))
    }

    pub fn hurst(&self) -> Result<HurstVector> {
        let h = self.hurst_values()?.unwrap_or_else(|| vec![0.7]);
        Ok(HurstVector::new(h)?)
    }

    pub fn table_params(&self) -> TableParams {
        TableParams { half_width: self.table_half_width, dx: self.table_dx, ..TableParams::default() }
    }

    pub fn check(&self) -> Result<()> {
        if self.representation == Rep::Fullseries && !(self.t_max > 2.0) {
            bail!(config_error(format!("T = {} but the full series needs T > 2", self.t_max)));
        }
        if self.threads == Some(0) {
            bail!(config_error("--threads must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let r: std::result::Result<RunConfig, _> = serde_json::from_str(r#"{"levle": 3}"#);
        assert!(r.is_err());
        let r: RunConfig = serde_json::from_str(r#"{"level": 3}"#).unwrap();
        assert_eq!(r.level, 3);
        assert_eq!(r.grid_n, 256);
    }

    #[test]
    fn hurst_expansion() {
        let c = RunConfig { h: Some(vec![0.9]), d: Some(3), ..RunConfig::default() };
        assert_eq!(c.hurst().unwrap().values(), &[0.9, 0.9, 0.9]);
        let c = RunConfig { h: Some(vec![0.8, 0.85]), d: Some(3), ..RunConfig::default() };
        assert!(c.hurst().is_err());
        let c = RunConfig { h: Some(vec![0.4]), ..RunConfig::default() };
        assert!(c.hurst().is_err());
    }
}
