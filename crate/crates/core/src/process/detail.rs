//! Wavelet-series coefficients `K_{j,k}(t)`.

use crate::error::{Error, Result};
use crate::hurst::HurstVector;
use crate::meyer::profile::PSI_SUPPORT;
use crate::meyer::TableSet;
use crate::quadrature::GaussLegendre;

const MAX_CELLS: f64 = 1e7;

/// `A_{j,k}(t) = \int_0^t prod psi_{h_l}(2^{j_l} s - k_l) ds`.
pub fn detail_integral(h: &HurstVector, j: &[i64], k: &[i64], t: f64, tables: &TableSet) -> Result<f64> {
    let d = h.d();
    if j.len() != d || k.len() != d {
        return Err(Error::Precondition("j and k must have length d".into()));
    }
    if t < 0.0 {
        return Err(Error::Domain(format!("t = {t} must be non-negative")));
    }
    let factors = h.values().iter().map(|&hl| tables.fractional_primitive(hl)).collect::<Result<Vec<_>>>()?;
    let r = tables.params.half_width;
    let scales: Vec<f64> = j.iter().map(|&jl| (jl as f64).exp2()).collect();
    let mut lo = 0.0f64;
    let mut hi = t;
    for (s, &kl) in scales.iter().zip(k) {
        lo = lo.max((kl as f64 - r) / s);
        hi = hi.min((kl as f64 + r) / s);
    }
    if hi <= lo {
        return Ok(0.0);
    }
    let omega: f64 = scales.iter().sum::<f64>() * PSI_SUPPORT;
    let cells = ((hi - lo) * omega / 2.0).ceil().max(1.0);
    if cells > MAX_CELLS {
        return Err(Error::Budget(format!("{cells} quadrature cells exceed {MAX_CELLS}")));
    }
    let cells = cells as usize;
    let rule = GaussLegendre::new(8);
    let width = (hi - lo) / cells as f64;
    let mut total = 0.0;
    for c in 0..cells {
        let a = lo + c as f64 * width;
        rule.for_each_node(a, a + width, |s, w| {
            let v: f64 = factors
                .iter()
                .zip(&scales)
                .zip(k)
                .map(|((f, sc), &kl)| f.eval(sc * s - kl as f64))
                .product();
            total += w * v;
        });
    }
    Ok(total)
}

/// `K_{j,k}(t) = 2^{sum j_l (1 - h_l)} A_{j,k}(t)`.
pub fn detail_coefficient(h: &HurstVector, j: &[i64], k: &[i64], t: f64, tables: &TableSet) -> Result<f64> {
    let expo: f64 = j.iter().zip(h.values()).map(|(&jl, hl)| jl as f64 * (1.0 - hl)).sum();
    Ok(expo.exp2() * detail_integral(h, j, k, t, tables)?)
}
