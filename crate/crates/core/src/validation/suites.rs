//! Named suites with their default configurations.

use super::covariance::{fbm_covariance_test, CovarianceConfig};
use super::identities::{chaos_route_suite, combinatorics_suite, farima_suite, meyer_suite, ChaosRouteConfig};
use super::moments::{moments_suite, MomentConfig};
use super::rate::{fullseries_rate_test, rate_suite, rate_test, FullRateConfig, RateConfig};
use super::report::SuiteReport;
use super::selfsim::{selfsim_suite, selfsimilarity_test, SelfSimConfig};
use crate::error::{Error, Result};
use crate::hurst::HurstVector;
use crate::meyer::TableSet;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Meyer,
    Farima,
    Combinatorics,
    Chaos,
    Moments,
    Rate,
    FullseriesRate,
    Covariance,
    Selfsim,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::Meyer,
        SuiteName::Farima,
        SuiteName::Combinatorics,
        SuiteName::Chaos,
        SuiteName::Moments,
        SuiteName::Rate,
        SuiteName::FullseriesRate,
        SuiteName::Covariance,
        SuiteName::Selfsim,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Meyer => "meyer",
            SuiteName::Farima => "farima",
            SuiteName::Combinatorics => "combinatorics",
            SuiteName::Chaos => "chaos",
            SuiteName::Moments => "moments",
            SuiteName::Rate => "rate",
            SuiteName::FullseriesRate => "fullseries-rate",
            SuiteName::Covariance => "covariance",
            SuiteName::Selfsim => "selfsim",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite '{s}'")))
    }
}

/// Overrides shared by all suites; `None` keeps the suite default.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub quick: bool,
    pub seed: Option<u64>,
    pub h: Option<Vec<f64>>,
    pub replicas: Option<usize>,
}

impl SuiteOptions {
    fn hurst_list(&self, defaults: &[&[f64]]) -> Result<Vec<HurstVector>> {
        match &self.h {
            Some(h) => Ok(vec![HurstVector::new(h.clone())?]),
            None => defaults.iter().map(|h| HurstVector::new(h.to_vec())).collect(),
        }
    }
}

pub fn run_suite(name: SuiteName, opts: &SuiteOptions, tables: &TableSet) -> Result<SuiteReport> {
    let quick = opts.quick;
    let mut report = match name {
        SuiteName::Meyer => {
            let hs = match &opts.h {
                Some(h) => h.clone(),
                None => vec![0.7, 0.8, 0.85, 0.9],
            };
            meyer_suite(tables, &hs)?
        }
        SuiteName::Farima => farima_suite()?,
        SuiteName::Combinatorics => combinatorics_suite()?,
        SuiteName::Chaos => {
            let mut cfg = ChaosRouteConfig::default();
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            chaos_route_suite(&cfg)?
        }
        SuiteName::Moments => {
            let mut cfg = if quick { MomentConfig::quick() } else { MomentConfig::default() };
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            if let Some(n) = opts.replicas {
                cfg.epsilon_replicas = n;
                cfg.isometry_replicas = n;
            }
            let h = opts.hurst_list(&[&[0.8, 0.85]])?.remove(0);
            moments_suite(&h, &cfg, quick)?
        }
        SuiteName::Rate => {
            let mut cfg = RateConfig::default();
            if quick {
                cfg.levels = (2, 6);
                cfg.replicas = 32;
            }
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            if let Some(n) = opts.replicas {
                cfg.replicas = n;
            }
            let reports = opts
                .hurst_list(&[&[0.7], &[0.8, 0.85]])?
                .iter()
                .map(|h| rate_test(h, &cfg, tables))
                .collect::<Result<Vec<_>>>()?;
            rate_suite("rate", &reports, quick)
        }
        SuiteName::FullseriesRate => {
            let mut cfg = FullRateConfig::default();
            if quick {
                cfg.levels = (2, 6);
                cfg.replicas = 32;
            }
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            if let Some(n) = opts.replicas {
                cfg.replicas = n;
            }
            let reports = opts
                .hurst_list(&[&[0.8, 0.85]])?
                .iter()
                .map(|h| fullseries_rate_test(h, &cfg, tables))
                .collect::<Result<Vec<_>>>()?;
            rate_suite("fullseries-rate", &reports, quick)
        }
        SuiteName::Covariance => {
            let mut cfg = CovarianceConfig::default();
            if quick {
                cfg.replicas = 2000;
            }
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            if let Some(n) = opts.replicas {
                cfg.replicas = n;
            }
            let h = opts.hurst_list(&[&[0.7]])?.remove(0);
            if h.d() != 1 {
                return Err(Error::Precondition(format!("covariance suite needs d = 1, got d = {}", h.d())));
            }
            fbm_covariance_test(h.values()[0], &cfg, tables)?.suite(quick)
        }
        SuiteName::Selfsim => {
            let mut cfg = SelfSimConfig::default();
            if quick {
                cfg.replicas = 200;
                cfg.level = 5;
            }
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            if let Some(n) = opts.replicas {
                cfg.replicas = n;
            }
            let reports = opts
                .hurst_list(&[&[0.7], &[0.8, 0.85], &[0.9, 0.9, 0.9]])?
                .iter()
                .map(|h| selfsimilarity_test(h, &cfg, tables))
                .collect::<Result<Vec<_>>>()?;
            selfsim_suite(&reports, quick)
        }
    };
    report.quick = quick;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        }
        assert!("bogus".parse::<SuiteName>().is_err());
    }
}
