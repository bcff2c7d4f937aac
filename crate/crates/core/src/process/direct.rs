//! Scaling-function process by direct time quadrature of
//! `sum_k sigma_{J,k} prod Phi_Delta^{(h_l - 1/2)}(2^J u - k_l)`.

use super::abel::{base_meta, farima_window, gamma_set, LagCovariances};
use super::path::{time_grid, Representation, SamplePath};
use super::ApproxParams;
use crate::chaos::wick_product;
use crate::error::{Error, Result};
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use crate::meyer::TableSet;
use crate::quadrature::GaussLegendre;
use rayon::prelude::*;

/// Cross-check form of [`super::approx_path`].
///
/// At each node `u` the sum runs over `|k_l - 2^J u| <= B` on every axis; by
/// multilinearity it equals the Wick product of
/// `V_l(u) = sum_k Z^{(delta_l)}_k Phi_l(2^J u - k)`.
pub fn approx_path_direct(
    h: &HurstVector,
    params: &ApproxParams,
    nodes_per_cell: usize,
    field: &GaussianField,
    tables: &TableSet,
) -> Result<SamplePath> {
    params.validate()?;
    if nodes_per_cell == 0 {
        return Err(Error::Precondition("at least one node per cell".into()));
    }
    let d = h.d();
    let band = params.band;
    let scale = params.scale();
    let k_lo = -band;
    let k_hi = (scale * params.t_max).ceil() as i64 + band;
    let gammas = gamma_set(h, params.farima_order)?;
    let z = farima_window(params.level, &gammas, k_lo, k_hi, field)?;
    let cov = LagCovariances::new(&gammas, 2 * band);
    let factors = h.deltas().iter().map(|&dl| tables.fractional_scaling(dl)).collect::<Result<Vec<_>>>()?;
    let rule = GaussLegendre::new(nodes_per_cell);
    let times = time_grid(params.t_max, params.grid_n);
    let step = params.t_max / params.grid_n as f64;
    let cells = (step * scale * 4.0).ceil().max(1.0) as usize;
    let width = step / cells as f64;
    let prefactor = (-(params.level as f64) * (h.sum() - d as f64)).exp2();

    let integrand = |u: f64| {
        let y = scale * u;
        let a = ((y - band as f64).ceil() as i64).max(k_lo);
        let b = ((y + band as f64).floor() as i64).min(k_hi);
        let weights: Vec<Vec<f64>> = factors.iter().map(|f| (a..=b).map(|k| f.eval(y - k as f64)).collect()).collect();
        let v: Vec<f64> = (0..d)
            .map(|l| weights[l].iter().zip(a..=b).map(|(w, k)| w * z[l][(k - k_lo) as usize]).sum())
            .collect();
        let mut c = vec![0.0; d * d];
        for p in 0..d {
            for q in p..d {
                let mut s = 0.0;
                for (i, wp) in weights[p].iter().enumerate() {
                    for (j, wq) in weights[q].iter().enumerate() {
                        s += wp * wq * cov.get(p, q, i as i64 - j as i64);
                    }
                }
                c[p * d + q] = s;
                c[q * d + p] = s;
            }
        }
        wick_product(&v, |p, q| c[p * d + q])
    };

    let increments: Vec<f64> = (0..params.grid_n)
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for c in 0..cells {
                let a = times[i] + c as f64 * width;
                rule.for_each_node(a, a + width, |u, w| s += w * integrand(u));
            }
            s
        })
        .collect();
    let mut values = Vec::with_capacity(params.grid_n + 1);
    values.push(0.0);
    let mut acc = 0.0;
    for inc in increments {
        acc += prefactor * inc;
        values.push(acc);
    }
    let mut meta = base_meta(field, Representation::Approx, params.level, h.values().to_vec(), params.t_max, params.grid_n, tables);
    meta.band = Some(band);
    meta.q_range = Some((k_lo, k_hi));
    meta.farima_order = Some(params.farima_order);
    Ok(SamplePath { times, values, meta })
}
