//! Scaling-function process through partial sums of generalized FARIMA
//! variables and the integral windows `Phi~_n`.

use super::path::{time_grid, PathMeta, Representation, SamplePath};
use super::ApproxParams;
use crate::chaos::{truncated_covariance, wick_product};
use crate::error::{Error, Result};
use crate::farima::{gamma_coefficients, FarimaFilter, GammaCoefficients};
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use crate::meyer::{FunctionTable, TableKey, TableParams, TableSet};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::Arc;

/// Relative warning threshold for the outermost offset shell.
pub const BAND_WARNING: f64 = 1e-3;

/// Truncated cross-covariances `E[Z^a_{k+lag} Z^b_k]` for `|lag| <= max_lag`.
pub(crate) struct LagCovariances {
    d: usize,
    max_lag: i64,
    values: Vec<f64>,
}

impl LagCovariances {
    pub(crate) fn new(gammas: &[GammaCoefficients], max_lag: i64) -> Self {
        let d = gammas.len();
        let width = (2 * max_lag + 1) as usize;
        let mut values = vec![0.0; d * d * width];
        for a in 0..d {
            for b in 0..d {
                for lag in -max_lag..=max_lag {
                    values[(a * d + b) * width + (lag + max_lag) as usize] =
                        truncated_covariance(&gammas[a], &gammas[b], lag);
                }
            }
        }
        Self { d, max_lag, values }
    }

    #[inline]
    pub(crate) fn get(&self, a: usize, b: usize, lag: i64) -> f64 {
        let width = (2 * self.max_lag + 1) as usize;
        self.values[(a * self.d + b) * width + (lag + self.max_lag) as usize]
    }
}

/// Truncated FARIMA values of every axis over `[lo, hi]`.
pub(crate) fn farima_window(
    level: i32,
    gammas: &[GammaCoefficients],
    lo: i64,
    hi: i64,
    field: &GaussianField,
) -> Result<Vec<Vec<f64>>> {
    let order = gammas.iter().map(|g| g.order()).max().unwrap_or(0) as i64;
    let len = (hi - lo + 1) as usize;
    let noise = field.scaling(level, lo - order, hi);
    gammas
        .iter()
        .map(|g| {
            let skip = (order - g.order() as i64) as usize;
            FarimaFilter::new(g.clone(), len).apply(&noise[skip..])
        })
        .collect()
}

pub(crate) fn gamma_set(h: &HurstVector, order: usize) -> Result<Vec<GammaCoefficients>> {
    h.deltas().iter().map(|&dl| gamma_coefficients(dl, order)).collect()
}

/// `sigma_{J,(p, p+n_2, ..., p+n_d)}` for every offset `n` in `[-B, B]^{d-1}`
/// and every `p` in `[p_lo, p_hi]`.
#[derive(Debug, Clone)]
pub struct RelativeSigma {
    pub p_lo: i64,
    pub p_hi: i64,
    pub offsets: Vec<Vec<i64>>,
    pub values: Vec<Vec<f64>>,
}

pub(crate) fn offsets(d: usize, band: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 1..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-band..=band).map(move |n| {
                    let mut w = v.clone();
                    w.push(n);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn relative_sigma(
    level: i32,
    h: &HurstVector,
    p_lo: i64,
    p_hi: i64,
    band: i64,
    field: &GaussianField,
    order: usize,
) -> Result<RelativeSigma> {
    if p_hi < p_lo {
        return Err(Error::Precondition("empty sigma window".into()));
    }
    let d = h.d();
    let gammas = gamma_set(h, order)?;
    let z_lo = p_lo - band;
    let z = farima_window(level, &gammas, z_lo, p_hi + band, field)?;
    let cov = LagCovariances::new(&gammas, 2 * band);
    let offs = offsets(d, band);
    let values = offs
        .par_iter()
        .map(|n| {
            let mut shift = vec![0i64; d];
            shift[1..].copy_from_slice(n);
            let mut zs = vec![0.0; d];
            (p_lo..=p_hi)
                .map(|p| {
                    for (l, s) in shift.iter().enumerate() {
                        zs[l] = z[l][(p + s - z_lo) as usize];
                    }
                    wick_product(&zs, |a, b| cov.get(a, b, shift[a] - shift[b]))
                })
                .collect()
        })
        .collect();
    Ok(RelativeSigma { p_lo, p_hi, offsets: offs, values })
}

/// `Phi~_n(y) = \int_{y-1}^{y} Phi_1(v) prod_{l >= 2} Phi_l(v - n_l) dv`
/// with `Phi_l = Phi_Delta^{(delta_l)}`.
pub fn abel_kernel(tables: &TableSet, deltas: &[f64], n: &[i64]) -> Result<Arc<FunctionTable>> {
    if n.len() + 1 != deltas.len() {
        return Err(Error::Precondition("offset vector must have length d - 1".into()));
    }
    let factors: Vec<Arc<FunctionTable>> =
        deltas.iter().map(|&dl| tables.fractional_scaling(dl)).collect::<Result<_>>()?;
    let key = TableKey::AbelKernel(deltas.iter().map(|v| v.to_bits()).collect(), n.to_vec());
    tables.get_or_build(key, |p| build_abel_kernel(&factors, n, p))
}

fn build_abel_kernel(factors: &[Arc<FunctionTable>], n: &[i64], params: &TableParams) -> Result<FunctionTable> {
    let len = factors[0].samples.len();
    let step = (1.0 / params.dx).round() as i64;
    let mut prod = factors[0].samples.clone();
    for (f, &nl) in factors[1..].iter().zip(n) {
        for (i, v) in prod.iter_mut().enumerate() {
            let j = i as i64 - nl * step;
            *v *= if j >= 0 && (j as usize) < len { f.samples[j as usize] } else { 0.0 };
        }
    }
    let m = (2 * len).next_power_of_two();
    let mut buf: Vec<Complex64> = prod.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(m, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let mut m4 = 0.0;
    for (k, v) in buf.iter_mut().enumerate() {
        let kk = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
        let xi = 2.0 * PI * kk / (m as f64 * params.dx);
        if xi != 0.0 {
            *v *= (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -xi)) / Complex64::new(0.0, xi);
        }
        m4 += xi.powi(4) * v.norm();
    }
    m4 /= m as f64;
    planner.plan_fft_inverse(m).process(&mut buf);
    let samples = buf[..len].iter().map(|v| v.re / m as f64).collect();
    let label = format!("abel_kernel({n:?})");
    FunctionTable::from_samples(&label, params, samples, m4)
}

/// `sum_q partial[q] (kernel(y - q) - kernel(-q))` summed in a fixed order.
pub(crate) fn abel_sum(kernel: &FunctionTable, partial: &[f64], q_lo: i64, y: f64) -> f64 {
    let r = kernel.half_width;
    let q_hi = q_lo + partial.len() as i64 - 1;
    let sweep = |y: f64| {
        let a = ((y - r).ceil() as i64).max(q_lo);
        let b = ((y + r).floor() as i64).min(q_hi);
        let mut s = 0.0;
        for q in a..=b {
            s += partial[(q - q_lo) as usize] * kernel.eval(y - q as f64);
        }
        s
    };
    sweep(y) - sweep(0.0)
}

/// Partial sums `S_q`, `q in [q_lo, q_hi]`, anchored at `S_0 = 0`, of a
/// sequence given on `[q_lo + 1, q_hi]`.
pub(crate) fn partial_sums(sigma: &[f64], q_lo: i64) -> Vec<f64> {
    let len = sigma.len() + 1;
    let mut s = vec![0.0; len];
    let zero = (-q_lo) as usize;
    for i in zero + 1..len {
        s[i] = s[i - 1] + sigma[i - 1];
    }
    for i in (0..zero).rev() {
        s[i] = s[i + 1] - sigma[i];
    }
    s
}

pub(crate) struct AbelAssembly<'a> {
    pub kernels: Vec<Arc<FunctionTable>>,
    pub partials: Vec<Vec<f64>>,
    pub shell: Vec<bool>,
    pub q_lo: i64,
    pub scale: f64,
    pub prefactor: f64,
    pub times: &'a [f64],
}

impl AbelAssembly<'_> {
    /// Path values and the sup norm of the outer-shell contribution.
    pub(crate) fn run(&self) -> (Vec<f64>, f64) {
        let rows: Vec<(f64, f64)> = self
            .times
            .par_iter()
            .map(|&t| {
                let y = self.scale * t;
                let mut total = 0.0;
                let mut shell = 0.0;
                for ((k, p), outer) in self.kernels.iter().zip(&self.partials).zip(&self.shell) {
                    let v = abel_sum(k, p, self.q_lo, y);
                    total += v;
                    if *outer {
                        shell += v;
                    }
                }
                (self.prefactor * total, self.prefactor * shell)
            })
            .collect();
        let shell = rows.iter().fold(0.0f64, |m, r| m.max(r.1.abs()));
        (rows.into_iter().map(|r| r.0).collect(), shell)
    }
}

pub(crate) fn band_warning(shell: f64, values: &[f64], band: i64) -> Option<String> {
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (shell > BAND_WARNING * sup).then(|| {
        format!("band B = {band} too small: outer shell contributes {shell:.3e} against sup norm {sup:.3e}")
    })
}

pub(crate) fn base_meta(
    field: &GaussianField,
    rep: Representation,
    level: i32,
    h: Vec<f64>,
    t_max: f64,
    grid_n: usize,
    tables: &TableSet,
) -> PathMeta {
    PathMeta {
        seed: field.seed,
        replica: field.replica,
        representation: rep.tag(level),
        level,
        h,
        t_max,
        grid_n,
        band: None,
        q_range: None,
        farima_order: None,
        field_base_level: field.base_level,
        table_half_width: tables.params.half_width,
        table_dx: tables.params.dx,
        fullseries: None,
        warnings: Vec::new(),
    }
}

/// `X_{h,J}` on `grid_n + 1` points of `[0, T]`, with the `k`-sum restricted to
/// `k_1` in the `q` range and `|k_l - k_1| <= B`.
pub fn approx_path(h: &HurstVector, params: &ApproxParams, field: &GaussianField, tables: &TableSet) -> Result<SamplePath> {
    params.validate()?;
    let (q_lo, q_hi) = params.resolved_q_range();
    let d = h.d();
    let rs = relative_sigma(params.level, h, q_lo + 1, q_hi, params.band, field, params.farima_order)?;
    let deltas = h.deltas();
    let kernels = rs.offsets.iter().map(|n| abel_kernel(tables, &deltas, n)).collect::<Result<Vec<_>>>()?;
    let partials = rs.values.iter().map(|s| partial_sums(s, q_lo)).collect();
    let shell = rs.offsets.iter().map(|n| n.iter().any(|v| v.abs() == params.band)).collect();
    let times = time_grid(params.t_max, params.grid_n);
    let expo = h.sum() - d as f64 + 1.0;
    let asm = AbelAssembly {
        kernels,
        partials,
        shell,
        q_lo,
        scale: params.scale(),
        prefactor: (-(params.level as f64) * expo).exp2(),
        times: &times,
    };
    let (values, shell) = asm.run();
    let mut meta = base_meta(field, Representation::Abel, params.level, h.values().to_vec(), params.t_max, params.grid_n, tables);
    meta.band = Some(params.band);
    meta.q_range = Some((q_lo, q_hi));
    meta.farima_order = Some(params.farima_order);
    if d > 1 {
        if let Some(w) = band_warning(shell, &values, params.band) {
            log::warn!("{w}");
            meta.warnings.push(w);
        }
    }
    Ok(SamplePath { times, values, meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{composite, GaussLegendre};

    fn small_tables() -> TableSet {
        TableSet::new(TableParams { half_width: 16.0, dx: 1.0 / 64.0, ..TableParams::default() })
    }

    #[test]
    fn partial_sums_are_anchored() {
        let s = partial_sums(&[1.0, 2.0, 3.0, 4.0], -2);
        // q = -2..=2, sigma on p = -1..=2.
        assert_eq!(s, vec![-3.0, -2.0, 0.0, 3.0, 7.0]);
    }

    #[test]
    fn abel_kernel_matches_quadrature() {
        let tables = small_tables();
        let deltas = [0.3, 0.35];
        let k = abel_kernel(&tables, &deltas, &[2]).unwrap();
        let a = tables.fractional_scaling(0.3).unwrap();
        let b = tables.fractional_scaling(0.35).unwrap();
        let rule = GaussLegendre::order16();
        for y in [-1.5, 0.0, 0.7, 2.25, 4.0] {
            let q = composite(rule, |v| a.eval(v) * b.eval(v - 2.0), y - 1.0, y, 16);
            assert!((k.eval(y) - q).abs() < 1e-7, "y = {y}: {} vs {q}", k.eval(y));
        }
    }

    #[test]
    fn one_dimensional_kernel_is_shifted_order() {
        let tables = small_tables();
        let k = abel_kernel(&tables, &[0.2], &[]).unwrap();
        let f = tables.fractional_scaling(1.2).unwrap();
        for y in [-2.0, -0.3, 0.5, 1.0, 3.7] {
            assert!((k.eval(y) - f.eval(y)).abs() < 1e-8);
        }
    }

    #[test]
    fn path_starts_at_zero_and_is_deterministic() {
        let tables = small_tables();
        let h = HurstVector::new(vec![0.8, 0.85]).unwrap();
        let mut p = ApproxParams::new(3, 1.0, 16);
        p.band = 4;
        p.farima_order = 256;
        let f = GaussianField::new(11, 1);
        let a = approx_path(&h, &p, &f, &tables).unwrap();
        let b = approx_path(&h, &p, &f, &tables).unwrap();
        assert_eq!(a.values[0], 0.0);
        assert_eq!(a.values, b.values);
        assert_eq!(a.values.len(), 17);
        assert!(a.sup_norm() > 0.0);
    }

    #[test]
    fn narrow_q_range_rejected() {
        let tables = small_tables();
        let h = HurstVector::new(vec![0.7]).unwrap();
        let mut p = ApproxParams::new(2, 1.0, 4);
        p.q_range = Some((0, 3));
        let f = GaussianField::new(1, 0);
        assert!(matches!(approx_path(&h, &p, &f, &tables), Err(Error::Precondition(_))));
    }
}
