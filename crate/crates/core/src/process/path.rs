//! Sample paths on a uniform grid with provenance metadata.

use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    /// Scaling-function process assembled through partial sums (Abel form).
    Abel,
    /// Scaling-function process by direct time quadrature.
    Approx,
    /// Truncated wavelet series over the index sets `S_N^+ u S_N^-`.
    FullSeries,
    /// Low-frequency part of fractional Brownian motion.
    Fbm,
}

impl Representation {
    pub fn tag(&self, level: i32) -> String {
        let name = match self {
            Representation::Abel => "abel",
            Representation::Approx => "approx",
            Representation::FullSeries => "fullseries",
            Representation::Fbm => "fbm",
        };
        format!("{name}-{level}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullSeriesStats {
    pub b: f64,
    pub b_prime: f64,
    pub g: f64,
    /// `|S_N^+| + |S_N^-|`.
    pub nominal_terms: f64,
    /// `|A_1| + |A_3| - |A_2 n A_3|`, the per-axis `(j, k)` indices.
    pub axis_terms: u64,
    /// Per-axis evaluations performed, summed over quadrature nodes.
    pub evaluated_terms: u64,
    /// Per-axis evaluations skipped, summed over quadrature nodes: outside the
    /// table support or with magnitude bound below the threshold.
    pub pruned_terms: u64,
    pub prune_threshold: f64,
    pub quadrature_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMeta {
    pub seed: u64,
    pub replica: u64,
    pub representation: String,
    pub level: i32,
    pub h: Vec<f64>,
    pub t_max: f64,
    pub grid_n: usize,
    pub band: Option<i64>,
    pub q_range: Option<(i64, i64)>,
    pub farima_order: Option<usize>,
    pub field_base_level: i32,
    pub table_half_width: f64,
    pub table_dx: f64,
    pub fullseries: Option<FullSeriesStats>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: PathMeta,
}

/// `grid_n + 1` equally spaced times on `[0, t_max]`.
pub fn time_grid(t_max: f64, grid_n: usize) -> Vec<f64> {
    (0..=grid_n).map(|i| t_max * i as f64 / grid_n as f64).collect()
}

impl SamplePath {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Value at the grid time closest to `t`.
    pub fn at(&self, t: f64) -> f64 {
        let n = self.meta.grid_n as f64;
        let i = (t / self.meta.t_max * n).round().clamp(0.0, n) as usize;
        self.values[i]
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(w, "{t:.16e},{v:.16e}")?;
        }
        Ok(())
    }

    pub fn write_meta_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.meta)?;
        Ok(())
    }

    /// Write `<stem>.csv` and `<stem>.meta.json`.
    pub fn save(&self, csv_path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(csv_path)?);
        self.write_csv(&mut f)?;
        f.flush()?;
        let meta = csv_path.with_extension("meta.json");
        let mut m = std::io::BufWriter::new(std::fs::File::create(meta)?);
        self.write_meta_json(&mut m)?;
        m.flush()?;
        Ok(())
    }
}

/// Sup norm of the difference of two paths on a common grid.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
