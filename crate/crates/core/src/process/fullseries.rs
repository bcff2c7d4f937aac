//! Truncated wavelet-type series over `S_N^+ u S_N^-`.
//!
//! With per-axis boxes `A_1 = [-2^{Nb}, N-1] x [-K+, K+]`,
//! `A_2 = [-2^{Nb}, -1] x [-K+, K+]` and `A_3 = [-2^{Nb'}, -1] x [-K-, K-]`,
//! the index set is `A_1^d \ A_2^d` together with `A_3^d`. For a box `A` the
//! sum over `A^d` of `eps_{j,k} prod a_l` is the Wick product of
//! `W_l = sum_A a_l g^psi_{j,k}` with covariances `sum_A a_a a_b`, where
//! `a_l(s) = 2^{j(1-h_l)} psi_{h_l}(2^j s - k)`. The integrand is evaluated at
//! Gauss nodes and integrated in time.

use super::abel::base_meta;
use super::path::{time_grid, FullSeriesStats, Representation, SamplePath};
use crate::chaos::wick_product;
use crate::error::{Error, Result};
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use crate::meyer::profile::PSI_SUPPORT;
use crate::meyer::{FunctionTable, TableSet};
use crate::quadrature::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Parameters of the truncated full series at level `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullSeriesParams {
    pub level: i32,
    pub t_max: f64,
    pub grid_n: usize,
    pub b: f64,
    pub b_prime: f64,
    pub g: f64,
    pub gl_order: usize,
    pub prune_threshold: f64,
    /// Cap on per-axis multiply-adds, summed over nodes and replicas.
    pub max_work: f64,
}

impl FullSeriesParams {
    pub fn new(level: i32, t_max: f64, grid_n: usize) -> Self {
        Self {
            level,
            t_max,
            grid_n,
            b: 1.0,
            b_prime: 1.0,
            g: 1.0,
            gl_order: 8,
            prune_threshold: 1e-14,
            max_work: 1e12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 2.0) || !self.t_max.is_finite() {
            return Err(Error::Precondition(format!("T = {} but the index sets require T > 2", self.t_max)));
        }
        if self.level < 1 {
            return Err(Error::Precondition(format!("N = {} must be at least 1", self.level)));
        }
        for (name, v) in [("b", self.b), ("b'", self.b_prime), ("g", self.g)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Precondition(format!("{name} = {v} must be positive")));
            }
        }
        if self.grid_n == 0 || self.gl_order == 0 {
            return Err(Error::Precondition("grid_n and gl_order must be positive".into()));
        }
        Ok(())
    }

    /// `(floor 2^{Nb}, floor 2^{N+1} T, floor 2^{Nb'}, floor 2^{Ng})`.
    pub fn bounds(&self) -> Result<(i64, i64, i64, i64)> {
        let n = self.level as f64;
        let cap = |name: &str, v: f64| -> Result<i64> {
            if v > 2f64.powi(40) {
                return Err(Error::Budget(format!("{name} = {v:.3e} at N = {}", self.level)));
            }
            Ok(v.floor() as i64)
        };
        Ok((
            cap("2^{Nb}", (n * self.b).exp2())?,
            cap("2^{N+1} T", (n + 1.0).exp2() * self.t_max)?,
            cap("2^{Nb'}", (n * self.b_prime).exp2())?,
            cap("2^{Ng}", (n * self.g).exp2())?,
        ))
    }

    /// `|S_N^+| + |S_N^-| = |A_1|^d - |A_2|^d + |A_3|^d`.
    pub fn nominal_terms(&self, d: usize) -> Result<f64> {
        let (jp, kp, jm, km) = self.bounds()?;
        let a1 = ((self.level as i64 + jp) * (2 * kp + 1)) as f64;
        let a2 = (jp * (2 * kp + 1)) as f64;
        let a3 = (jm * (2 * km + 1)) as f64;
        Ok(a1.powi(d as i32) - a2.powi(d as i32) + a3.powi(d as i32))
    }
}

/// `max_{|x| >= i dx} |f(x)|` on the table grid.
fn envelope(f: &FunctionTable) -> Vec<f64> {
    let n = f.samples.len() / 2;
    let mut env = vec![0.0f64; n + 2];
    for i in (0..=n).rev() {
        env[i] = env[i + 1].max(f.samples[n + i].abs()).max(f.samples[n - i].abs());
    }
    env
}

const P0: usize = 0;
const BOTH: usize = 1;
const A2_ONLY: usize = 2;
const A3_ONLY: usize = 3;

struct Layout {
    j_min: i64,
    /// Per level: first stored `k`, last stored `k`, offset of the first row.
    rows: Vec<(i64, i64, usize)>,
    total_rows: usize,
}

impl Layout {
    fn new(j_min: i64, j_max: i64, k_cap: i64, t_max: f64, r: f64) -> Self {
        let mut rows = Vec::new();
        let mut off = 0;
        for j in j_min..=j_max {
            let lo = (-k_cap).max((-r).floor() as i64 - 1);
            let hi = k_cap.min(((j as f64).exp2() * t_max + r).ceil() as i64 + 1);
            rows.push((lo, hi, off));
            off += (hi - lo + 1).max(0) as usize;
        }
        Self { j_min, rows, total_rows: off }
    }

    fn row(&self, j: i64, k: i64) -> Option<usize> {
        let (lo, hi, off) = self.rows[(j - self.j_min) as usize];
        (k >= lo && k <= hi).then(|| off + (k - lo) as usize)
    }
}

struct Cell {
    integrals: Vec<f64>,
    evaluated: u64,
    enumerated: u64,
}

/// Paths `X~_{h,N}` for several replicas sharing all deterministic work.
pub fn fullseries_paths(
    h: &HurstVector,
    params: &FullSeriesParams,
    fields: &[GaussianField],
    tables: &TableSet,
) -> Result<Vec<SamplePath>> {
    params.validate()?;
    if fields.is_empty() {
        return Ok(Vec::new());
    }
    let d = h.d();
    let nrep = fields.len();
    let n = params.level as i64;
    let (jp, kp, jm, km) = params.bounds()?;
    let j_min = -jp.max(jm);
    let j_max = n - 1;
    let k_cap = kp.max(km);
    let r = tables.params.half_width;
    let dx = tables.params.dx;

    let factors: Vec<Arc<FunctionTable>> =
        h.values().iter().map(|&hl| tables.fractional_primitive(hl)).collect::<Result<_>>()?;
    let envs: Vec<Vec<f64>> = factors.iter().map(|f| envelope(f)).collect();
    let margin = 1.5;

    let omega = d as f64 * ((n - 1) as f64).exp2() * PSI_SUPPORT;
    let step = params.t_max / params.grid_n as f64;
    let cells_per_step = (step * omega / 2.0).ceil().max(1.0) as usize;
    let total_cells = cells_per_step * params.grid_n;
    let nodes = (total_cells * params.gl_order) as u64;
    let levels = (j_max - j_min + 1) as f64;
    let work = nodes as f64 * levels * (2.0 * r + 1.0) * nrep as f64 * d as f64;
    if work > params.max_work {
        return Err(Error::Budget(format!(
            "N = {}: estimated {work:.3e} operations exceed the budget {:.3e}",
            params.level, params.max_work
        )));
    }

    let layout = Layout::new(j_min, j_max, k_cap, params.t_max, r);
    let mut g = vec![0.0; layout.total_rows * nrep];
    for (ri, f) in fields.iter().enumerate() {
        for j in j_min..=j_max {
            let (lo, hi, off) = layout.rows[(j - j_min) as usize];
            if hi < lo {
                continue;
            }
            for (i, v) in f.detail(j as i32, lo, hi).into_iter().enumerate() {
                g[(off + i) * nrep + ri] = v;
            }
        }
    }

    let level_weights: Vec<Vec<f64>> = (j_min..=j_max)
        .map(|j| h.values().iter().map(|hl| (j as f64 * (1.0 - hl)).exp2()).collect())
        .collect();
    let rule = GaussLegendre::new(params.gl_order);
    let cell_width = step / cells_per_step as f64;

    let node_integrand = |s: f64, out: &mut [f64], evaluated: &mut u64, enumerated: &mut u64| {
        let mut w = vec![0.0; 4 * d * nrep];
        let mut c = vec![0.0; 4 * d * d];
        let mut a = vec![0.0; d];
        for j in j_min..=j_max {
            let lw = &level_weights[(j - j_min) as usize];
            let centre = (j as f64).exp2() * s;
            let lo = ((centre - r).ceil() as i64).max(-k_cap);
            let hi = ((centre + r).floor() as i64).min(k_cap);
            for k in lo..=hi {
                let cat = if j >= 0 {
                    if k.abs() > kp {
                        continue;
                    }
                    P0
                } else {
                    let in2 = j >= -jp && k.abs() <= kp;
                    let in3 = j >= -jm && k.abs() <= km;
                    match (in2, in3) {
                        (true, true) => BOTH,
                        (true, false) => A2_ONLY,
                        (false, true) => A3_ONLY,
                        (false, false) => continue,
                    }
                };
                *enumerated += 1;
                let x = centre - k as f64;
                let idx = ((x.abs() / dx) as usize).min(envs[0].len() - 1);
                if (0..d).all(|l| lw[l] * margin * envs[l][idx] < params.prune_threshold) {
                    continue;
                }
                *evaluated += 1;
                for l in 0..d {
                    a[l] = lw[l] * factors[l].eval(x);
                }
                let row = layout.row(j, k).expect("stored row");
                let gs = &g[row * nrep..(row + 1) * nrep];
                for l in 0..d {
                    let dst = &mut w[(cat * d + l) * nrep..(cat * d + l + 1) * nrep];
                    let al = a[l];
                    for (o, gv) in dst.iter_mut().zip(gs) {
                        *o += al * gv;
                    }
                }
                let cc = &mut c[cat * d * d..(cat + 1) * d * d];
                for p in 0..d {
                    for q in 0..d {
                        cc[p * d + q] += a[p] * a[q];
                    }
                }
            }
        }
        let cov = |cats: &[usize], p: usize, q: usize| cats.iter().map(|&k| c[k * d * d + p * d + q]).sum::<f64>();
        let boxes: [&[usize]; 3] = [&[P0, BOTH, A2_ONLY], &[BOTH, A2_ONLY], &[BOTH, A3_ONLY]];
        let signs = [1.0, -1.0, 1.0];
        let covs: Vec<Vec<f64>> = boxes
            .iter()
            .map(|cats| (0..d * d).map(|pq| cov(cats, pq / d, pq % d)).collect())
            .collect();
        let mut vals = vec![0.0; d];
        for (ri, o) in out.iter_mut().enumerate() {
            let mut total = 0.0;
            for ((cats, sign), cm) in boxes.iter().zip(signs).zip(&covs) {
                for (l, v) in vals.iter_mut().enumerate() {
                    *v = cats.iter().map(|&k| w[(k * d + l) * nrep + ri]).sum();
                }
                total += sign * wick_product(&vals, |p, q| cm[p * d + q]);
            }
            *o = total;
        }
    };

    let times = time_grid(params.t_max, params.grid_n);
    let cells: Vec<Cell> = (0..total_cells)
        .into_par_iter()
        .map(|ci| {
            let step_i = ci / cells_per_step;
            let a = times[step_i] + (ci % cells_per_step) as f64 * cell_width;
            let mut integrals = vec![0.0; nrep];
            let mut buf = vec![0.0; nrep];
            let mut evaluated = 0;
            let mut enumerated = 0;
            rule.for_each_node(a, a + cell_width, |s, wt| {
                node_integrand(s, &mut buf, &mut evaluated, &mut enumerated);
                for (o, v) in integrals.iter_mut().zip(&buf) {
                    *o += wt * v;
                }
            });
            Cell { integrals, evaluated, enumerated }
        })
        .collect();

    let axis_terms = {
        let a1 = ((n + jp) * (2 * kp + 1)) as u64;
        let a3 = (jm * (2 * km + 1)) as u64;
        let overlap = (jp.min(jm) * (2 * kp.min(km) + 1)) as u64;
        a1 + a3 - overlap
    };
    let evaluated: u64 = cells.iter().map(|c| c.evaluated).sum();
    let enumerated: u64 = cells.iter().map(|c| c.enumerated).sum();
    debug_assert!(enumerated <= axis_terms * nodes);
    let stats = FullSeriesStats {
        b: params.b,
        b_prime: params.b_prime,
        g: params.g,
        nominal_terms: params.nominal_terms(d)?,
        axis_terms,
        evaluated_terms: evaluated,
        pruned_terms: axis_terms * nodes - evaluated,
        prune_threshold: params.prune_threshold,
        quadrature_nodes: nodes as usize,
    };

    let paths = fields
        .iter()
        .enumerate()
        .map(|(ri, f)| {
            let mut values = Vec::with_capacity(params.grid_n + 1);
            values.push(0.0);
            let mut acc = 0.0;
            for step_cells in cells.chunks(cells_per_step) {
                let inc: f64 = step_cells.iter().map(|c| c.integrals[ri]).sum();
                acc += inc;
                values.push(acc);
            }
            let mut meta =
                base_meta(f, Representation::FullSeries, params.level, h.values().to_vec(), params.t_max, params.grid_n, tables);
            meta.fullseries = Some(stats.clone());
            SamplePath { times: times.clone(), values, meta }
        })
        .collect();
    Ok(paths)
}

/// Single-replica [`fullseries_paths`].
pub fn fullseries_path(h: &HurstVector, params: &FullSeriesParams, field: &GaussianField, tables: &TableSet) -> Result<SamplePath> {
    Ok(fullseries_paths(h, params, std::slice::from_ref(field), tables)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meyer::TableParams;
    use crate::process::detail_coefficient;
    use crate::chaos::epsilon;

    fn small_tables() -> TableSet {
        TableSet::new(TableParams { half_width: 16.0, dx: 1.0 / 64.0, ..TableParams::default() })
    }

    #[test]
    fn requires_long_horizon() {
        let h = HurstVector::new(vec![0.7]).unwrap();
        let p = FullSeriesParams::new(2, 2.0, 8);
        let f = GaussianField::new(1, 0);
        assert!(matches!(fullseries_path(&h, &p, &f, &small_tables()), Err(Error::Precondition(_))));
    }

    #[test]
    fn nominal_count() {
        let p = FullSeriesParams::new(2, 2.5, 8);
        // 2^{Nb} = 4, K+ = 20, 2^{Nb'} = 4, K- = 4.
        let a1 = 6.0 * 41.0;
        let a2 = 4.0 * 41.0;
        let a3 = 4.0 * 9.0;
        assert_eq!(p.nominal_terms(2).unwrap(), a1 * a1 - a2 * a2 + a3 * a3);
    }

    #[test]
    fn batched_replicas_match_single_runs() {
        let tables = small_tables();
        let h = HurstVector::new(vec![0.8, 0.85]).unwrap();
        let p = FullSeriesParams::new(2, 2.5, 5);
        let base = GaussianField::new(9, 0);
        let fields: Vec<_> = (0..3).map(|r| base.replica(r)).collect();
        let batch = fullseries_paths(&h, &p, &fields, &tables).unwrap();
        for (f, b) in fields.iter().zip(&batch) {
            let single = fullseries_path(&h, &p, f, &tables).unwrap();
            assert_eq!(single.values, b.values);
            assert_eq!(b.values[0], 0.0);
        }
        assert_ne!(batch[0].values, batch[1].values);
    }

    #[test]
    fn one_dimensional_series_matches_explicit_sum() {
        let tables = small_tables();
        let h = HurstVector::new(vec![0.7]).unwrap();
        let mut p = FullSeriesParams::new(1, 2.5, 5);
        p.gl_order = 12;
        let f = GaussianField::new(4, 0);
        let path = fullseries_path(&h, &p, &f, &tables).unwrap();
        // N = 1: A_1 minus A_2 leaves j = 0 with |k| <= 10; A_3 adds
        // j in {-2, -1} with |k| <= 2.
        let t = path.times[2];
        let mut expected = 0.0;
        for j in -2i64..=0 {
            let kmax = if j == 0 { 10 } else { 2 };
            for k in -kmax..=kmax {
                let e = epsilon(&[j], &[k], &f);
                expected += e * detail_coefficient(&h, &[j], &[k], t, &tables).unwrap();
            }
        }
        let (jp, kp, jm, km) = p.bounds().unwrap();
        assert_eq!((jp, kp, jm, km), (2, 10, 2, 2));
        assert!((path.values[2] - expected).abs() < 1e-8, "{} vs {expected}", path.values[2]);
    }
}
