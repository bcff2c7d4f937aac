//! Sample-path assembly for generalized Hermite processes.

pub mod abel;
pub mod detail;
pub mod direct;
pub mod fbm;
pub mod fullseries;
pub mod kernel;
pub mod path;

pub use abel::{abel_kernel, approx_path, relative_sigma, RelativeSigma};
pub use detail::{detail_coefficient, detail_integral};
pub use direct::approx_path_direct;
pub use fbm::fbm_path;
pub use fullseries::{fullseries_path, fullseries_paths, FullSeriesParams};
pub use kernel::kernel_oracle;
pub use path::{sup_distance, time_grid, FullSeriesStats, PathMeta, Representation, SamplePath};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default FARIMA truncation per unit of physical time.
pub const DEFAULT_HORIZON: f64 = 64.0;

/// Parameters of the scaling-function representations at level `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    pub level: i32,
    pub t_max: f64,
    pub grid_n: usize,
    /// Relative-offset band `B`.
    pub band: i64,
    /// Window of partial-sum indices `q`; defaults to `[-(B+1), ceil(2^J T) + B + 1]`.
    pub q_range: Option<(i64, i64)>,
    /// FARIMA truncation `P`.
    pub farima_order: usize,
}

impl ApproxParams {
    pub fn new(level: i32, t_max: f64, grid_n: usize) -> Self {
        Self {
            level,
            t_max,
            grid_n,
            band: 16,
            q_range: None,
            farima_order: horizon_order(DEFAULT_HORIZON, level),
        }
    }

    pub fn scale(&self) -> f64 {
        (self.level as f64).exp2()
    }

    pub fn resolved_q_range(&self) -> (i64, i64) {
        self.q_range.unwrap_or_else(|| {
            let top = (self.scale() * self.t_max).ceil() as i64;
            (-(self.band + 1), top + self.band + 1)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Precondition(format!("T = {} must be positive", self.t_max)));
        }
        if self.grid_n == 0 {
            return Err(Error::Precondition("grid_n must be positive".into()));
        }
        if self.band < 1 {
            return Err(Error::Precondition(format!("band B = {} must be at least 1", self.band)));
        }
        if self.farima_order == 0 {
            return Err(Error::Precondition("FARIMA order must be positive".into()));
        }
        let (lo, hi) = self.resolved_q_range();
        let top = self.scale() * self.t_max;
        if lo > -self.band || (hi as f64) < top + self.band as f64 {
            return Err(Error::Precondition(format!(
                "q range [{lo}, {hi}] does not cover [-{}, {:.3}]",
                self.band,
                top + self.band as f64
            )));
        }
        Ok(())
    }
}

/// FARIMA order covering a fixed physical horizon at level `J`.
pub fn horizon_order(horizon: f64, level: i32) -> usize {
    (horizon * (level as f64).exp2()).ceil().max(1.0) as usize
}
