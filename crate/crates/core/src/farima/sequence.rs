//! Truncated FARIMA filtering `Z_l = sum_{p=0}^{P} gamma_p g_{l-p}`.

use super::gamma::GammaCoefficients;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Reusable filter for a fixed truncation order and output length.
pub struct FarimaFilter {
    gamma: GammaCoefficients,
    output_len: usize,
    fft: Option<FftState>,
}

struct FftState {
    len: usize,
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

const DIRECT_LIMIT: usize = 1 << 18;

impl FarimaFilter {
    pub fn new(gamma: GammaCoefficients, output_len: usize) -> Self {
        let p = gamma.order();
        let fft = if (p + 1) * output_len > DIRECT_LIMIT {
            let len = (output_len + p + 1).next_power_of_two();
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(len);
            let inverse = planner.plan_fft_inverse(len);
            let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
            for (s, g) in spectrum.iter_mut().zip(&gamma.values) {
                s.re = *g;
            }
            forward.process(&mut spectrum);
            Some(FftState { len, spectrum, forward, inverse })
        } else {
            None
        };
        Self { gamma, output_len, fft }
    }

    pub fn order(&self) -> usize {
        self.gamma.order()
    }

    pub fn delta(&self) -> f64 {
        self.gamma.delta
    }

    /// Number of noise values needed: `output_len + order`.
    pub fn input_len(&self) -> usize {
        self.output_len + self.order()
    }

    /// `noise[i]` holds `g_{l_lo - P + i}`; returns `Z_{l_lo + i}` for `i < output_len`.
    pub fn apply(&self, noise: &[f64]) -> Result<Vec<f64>> {
        let p = self.order();
        if noise.len() != self.input_len() {
            return Err(Error::Precondition(format!(
                "noise window has {} values, filter needs {}",
                noise.len(),
                self.input_len()
            )));
        }
        match &self.fft {
            None => Ok((0..self.output_len)
                .map(|i| {
                    let top = i + p;
                    self.gamma.values.iter().enumerate().map(|(q, g)| g * noise[top - q]).sum()
                })
                .collect()),
            Some(st) => {
                let mut buf = vec![Complex64::new(0.0, 0.0); st.len];
                for (b, v) in buf.iter_mut().zip(noise) {
                    b.re = *v;
                }
                st.forward.process(&mut buf);
                for (b, s) in buf.iter_mut().zip(&st.spectrum) {
                    *b *= s;
                }
                st.inverse.process(&mut buf);
                let scale = 1.0 / st.len as f64;
                Ok((0..self.output_len).map(|i| buf[i + p].re * scale).collect())
            }
        }
    }
}

/// One-shot truncated FARIMA sequence over `[l_lo, l_hi]`.
pub fn farima_sequence(noise: &[f64], noise_start: i64, gamma: &GammaCoefficients, l_lo: i64, l_hi: i64) -> Result<Vec<f64>> {
    if l_hi < l_lo {
        return Ok(Vec::new());
    }
    let p = gamma.order() as i64;
    let first = l_lo - p;
    let last = l_hi;
    if first < noise_start || last >= noise_start + noise.len() as i64 {
        return Err(Error::Precondition(format!(
            "noise window [{noise_start}, {}) does not cover [{first}, {last}]",
            noise_start + noise.len() as i64
        )));
    }
    let a = (first - noise_start) as usize;
    let b = (last - noise_start) as usize;
    FarimaFilter::new(gamma.clone(), (l_hi - l_lo + 1) as usize).apply(&noise[a..=b])
}
