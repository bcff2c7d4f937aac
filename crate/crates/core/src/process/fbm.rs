//! Low-frequency part of fractional Brownian motion from FARIMA random walks.

use super::abel::{base_meta, farima_window, partial_sums, AbelAssembly};
use super::path::{time_grid, Representation, SamplePath};
use super::ApproxParams;
use crate::error::{Error, Result};
use crate::farima::gamma_coefficients;
use crate::field::GaussianField;
use crate::meyer::TableSet;

/// `B_{h,J}(t) = sum_k 2^{-Jh} S_{J,k} (Phi_Delta^{(h+1/2)}(2^J t - k) - Phi_Delta^{(h+1/2)}(-k))`.
pub fn fbm_path(h: f64, params: &ApproxParams, field: &GaussianField, tables: &TableSet) -> Result<SamplePath> {
    if !(h > 0.5 && h < 1.0) {
        return Err(Error::Domain(format!("h = {h} outside (1/2, 1)")));
    }
    params.validate()?;
    let (q_lo, q_hi) = params.resolved_q_range();
    let gamma = gamma_coefficients(h - 0.5, params.farima_order)?;
    let z = farima_window(params.level, &[gamma], q_lo + 1, q_hi, field)?;
    let kernel = tables.fractional_scaling(h + 0.5)?;
    let times = time_grid(params.t_max, params.grid_n);
    let asm = AbelAssembly {
        kernels: vec![kernel],
        partials: vec![partial_sums(&z[0], q_lo)],
        shell: vec![false],
        q_lo,
        scale: params.scale(),
        prefactor: (-(params.level as f64) * h).exp2(),
        times: &times,
    };
    let (values, _) = asm.run();
    let mut meta = base_meta(field, Representation::Fbm, params.level, vec![h], params.t_max, params.grid_n, tables);
    meta.band = Some(params.band);
    meta.q_range = Some((q_lo, q_hi));
    meta.farima_order = Some(params.farima_order);
    Ok(SamplePath { times, values, meta })
}
