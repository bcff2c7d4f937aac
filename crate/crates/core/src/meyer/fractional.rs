//! Builders for the Meyer tables and their fractional transforms.

use super::profile::{
    farima_symbol, fractional_derivative_symbol, fractional_difference_symbol, phi_hat, psi_hat,
    INV_SQRT_2PI, PHI_SUPPORT, PSI_SUPPORT,
};
use super::table::{FunctionTable, TableParams};
use crate::error::{Error, Result};
use crate::farima::gamma_coefficients;
use crate::quadrature::{integrate_graded, GaussLegendre, GradedMesh};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Minimal number of Fourier nodes across the spectral support.
pub const MIN_SPECTRAL_NODES: usize = 1 << 14;
const MAX_FFT_LEN: usize = 1 << 24;

/// Tabulate `f(x) = (2 pi)^{-1/2} \int e^{i xi x} f^(xi) d xi` for a spectrum
/// supported in `[-support, support]`.
pub fn spectral_table<S>(label: &str, params: &TableParams, support: f64, spectrum: S) -> Result<FunctionTable>
where
    S: Fn(f64) -> Complex64,
{
    let n = params.validate()?;
    let nyquist = PI / params.dx;
    if nyquist <= support {
        return Err(Error::Resolution(format!(
            "dx = {} cannot resolve spectral support {:.4} (Nyquist {:.4})",
            params.dx, support, nyquist
        )));
    }
    let mut m = (4 * n + 4).next_power_of_two();
    while (2.0 * support / (2.0 * PI / (m as f64 * params.dx))) < MIN_SPECTRAL_NODES as f64 {
        m *= 2;
    }
    if m > MAX_FFT_LEN {
        return Err(Error::Size(format!("FFT length {m} exceeds {MAX_FFT_LEN}")));
    }
    let dxi = 2.0 * PI / (m as f64 * params.dx);
    let kmax = (support / dxi).ceil() as usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut m4 = 0.0;
    for k in 0..=kmax {
        let xi = k as f64 * dxi;
        let v = spectrum(xi);
        buf[k] = v;
        m4 += xi.powi(4) * v.norm();
        if k > 0 {
            let w = spectrum(-xi);
            buf[m - k] = w;
            m4 += xi.powi(4) * w.norm();
        }
    }
    m4 *= INV_SQRT_2PI * dxi;
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let scale = INV_SQRT_2PI * dxi;
    let samples = (0..=2 * n)
        .map(|i| {
            let idx = (i as isize - n as isize).rem_euclid(m as isize) as usize;
            buf[idx].re * scale
        })
        .collect();
    FunctionTable::from_samples(label, params, samples, m4)
}

pub fn build_phi(params: &TableParams) -> Result<FunctionTable> {
    spectral_table("phi", params, PHI_SUPPORT, |xi| Complex64::new(phi_hat(xi), 0.0))
}

pub fn build_psi(params: &TableParams) -> Result<FunctionTable> {
    spectral_table("psi", params, PSI_SUPPORT, psi_hat)
}

/// `psi_h`, the wavelet filtered by `(i xi)^{1/2 - h}`.
pub fn build_fractional_primitive(h: f64, params: &TableParams) -> Result<FunctionTable> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Domain(format!("h = {h} outside (0, 1)")));
    }
    spectral_table(&format!("psi_h({h})"), params, PSI_SUPPORT, |xi| {
        fractional_derivative_symbol(xi, h) * psi_hat(xi)
    })
}

/// `Phi_Delta^{(delta)}`, the scaling function filtered by
/// `e^{-i delta xi/2} (sin(xi/2)/(xi/2))^delta`.
pub fn build_fractional_scaling(delta: f64, params: &TableParams) -> Result<FunctionTable> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::Domain(format!("delta = {delta} must be non-negative")));
    }
    spectral_table(&format!("Phi_Delta({delta})"), params, PHI_SUPPORT, |xi| {
        fractional_difference_symbol(xi, delta) * phi_hat(xi)
    })
}

/// `Phi^{(-delta)}(x) = sum_p gamma_p phi(x + p)`, summed exactly on the table grid.
pub fn build_phi_minus_delta(delta: f64, phi: &FunctionTable, max_terms: usize) -> Result<FunctionTable> {
    if delta.abs() >= 0.5 {
        return Err(Error::Domain(format!("|delta| = {} must be < 1/2", delta.abs())));
    }
    let step = (1.0 / phi.dx).round() as usize;
    if ((step as f64) * phi.dx - 1.0).abs() > 1e-12 {
        return Err(Error::Resolution("1/dx must be an integer".into()));
    }
    let terms = (2.0 * phi.half_width).ceil() as usize + 1;
    if terms > max_terms {
        return Err(Error::Budget(format!("series needs {terms} terms, budget {max_terms}")));
    }
    let gamma = gamma_coefficients(delta, terms)?;
    let len = phi.samples.len();
    let mut out = vec![0.0; len];
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for (p, g) in gamma.values.iter().enumerate() {
            let j = i + p * step;
            if j >= len {
                break;
            }
            s += g * phi.samples[j];
        }
        *o = s;
    }
    let params = TableParams {
        half_width: phi.half_width,
        dx: phi.dx,
        tail_exponent: 1.0 - delta,
        tail_tolerance: f64::INFINITY,
    };
    let mut t = FunctionTable::from_samples(&format!("Phi_minus({delta})"), &params, out, 0.0)?;
    t.interpolation_error = phi.interpolation_error * gamma.values.iter().map(|g| g.abs()).sum::<f64>();
    Ok(t)
}

/// `Phi^{(-delta)}(x)` by quadrature of its singular Fourier integral.
pub fn phi_minus_delta_fourier(delta: f64, x: f64) -> f64 {
    let rule = GaussLegendre::order16();
    let max_width = (0.5 / (1.0 + x.abs())).min(0.25);
    let f = |xi: f64| {
        let v = Complex64::from_polar(1.0, xi * x) * farima_symbol(xi, delta) * phi_hat(xi);
        v.re
    };
    let inner = 2.0 * PI / 3.0;
    let sing = if delta > 0.0 { Some(delta) } else { None };
    let near = GradedMesh::new(sing, None, max_width);
    let near_r = GradedMesh::new(None, sing, max_width);
    let plain = GradedMesh::new(None, None, max_width);
    let s = integrate_graded(rule, f, 0.0, inner, &near)
        + integrate_graded(rule, f, -inner, 0.0, &near_r)
        + integrate_graded(rule, f, inner, PHI_SUPPORT, &plain)
        + integrate_graded(rule, f, -PHI_SUPPORT, -inner, &plain);
    s * INV_SQRT_2PI
}
