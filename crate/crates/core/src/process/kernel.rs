//! Direct quadrature of the kernel `K_h(t, x)`; a desk-scale oracle.

use crate::error::{Error, Result};
use crate::hurst::HurstVector;
use crate::quadrature::{integrate_graded_dist, GaussLegendre, GradedMesh};
use statrs::function::gamma::gamma;

/// `K(t, x) = (prod Gamma(h_l - 1/2))^{-1} \int_0^t prod (s - x_l)_+^{h_l - 3/2} ds`.
pub fn kernel_oracle(h: &HurstVector, t: f64, x: &[f64], quad_nodes: usize) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t = {t} must be non-negative")));
    }
    if x.len() != h.d() {
        return Err(Error::Precondition("x must have one coordinate per Hurst component".into()));
    }
    if !(2..=128).contains(&quad_nodes) {
        return Err(Error::Budget(format!("quadrature order {quad_nodes} outside [2, 128]")));
    }
    let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lower = m.max(0.0);
    if lower >= t {
        return Ok(0.0);
    }
    let alpha: f64 = if m >= 0.0 {
        x.iter().zip(h.values()).filter(|(xi, _)| **xi == m).map(|(_, hl)| 1.5 - hl).sum()
    } else {
        0.0
    };
    if alpha >= 1.0 {
        return Err(Error::Domain(format!("kernel integrand not integrable at s = {m} (exponent {alpha})")));
    }
    let norm: f64 = h.values().iter().map(|hl| gamma(hl - 0.5)).product();
    let rule = GaussLegendre::new(quad_nodes);
    let mesh = GradedMesh { levels: 30, ..GradedMesh::new(Some(alpha.max(0.0)), None, (t - lower) / 8.0) };
    let v = integrate_graded_dist(
        &rule,
        |s, ds, _| {
            x.iter()
                .zip(h.values())
                .map(|(xi, hl)| {
                    let base = if *xi == m && m >= 0.0 { ds } else { s - xi };
                    base.powf(hl - 1.5)
                })
                .product()
        },
        lower,
        t,
        &mesh,
    );
    Ok(v / norm)
}
