//! Two-scale filters linking consecutive resolution levels.

use super::profile::{phi_hat, psi_band, INV_SQRT_2PI, PHI_SUPPORT, PSI_SUPPORT};
use crate::quadrature::GaussLegendre;
use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

/// A finitely supported filter `taps[i] = f_{offset + i}`.
#[derive(Debug, Clone)]
pub struct Filter {
    pub offset: i64,
    pub taps: Vec<f64>,
}

impl Filter {
    pub fn get(&self, n: i64) -> f64 {
        let i = n - self.offset;
        if i < 0 || i as usize >= self.taps.len() {
            0.0
        } else {
            self.taps[i as usize]
        }
    }

    pub fn first(&self) -> i64 {
        self.offset
    }

    pub fn last(&self) -> i64 {
        self.offset + self.taps.len() as i64 - 1
    }

    fn trimmed(offset: i64, mut taps: Vec<f64>, tail_mass: f64) -> Self {
        let mut offset = offset;
        let mut cut = 0.0;
        while let Some(v) = taps.first() {
            if cut + v.abs() >= tail_mass {
                break;
            }
            cut += v.abs();
            taps.remove(0);
            offset += 1;
        }
        let mut cut = 0.0;
        while let Some(v) = taps.last() {
            if cut + v.abs() >= tail_mass {
                break;
            }
            cut += v.abs();
            taps.pop();
        }
        Self { offset, taps }
    }
}

/// Low-pass `h_n = <phi, phi_{1,n}>` and high-pass `g_n = <psi, phi_{1,n}>`.
#[derive(Debug, Clone)]
pub struct TwoScaleFilters {
    pub lowpass: Filter,
    pub highpass: Filter,
}

const RAW_HALF: i64 = 400;
const TAIL_MASS: f64 = 1e-12;

fn cosine_coefficients<F: Fn(f64) -> f64>(weight: F, upper: f64, shift: i64) -> Vec<f64> {
    let rule = GaussLegendre::order16();
    let panels = (upper / 0.01).ceil() as usize;
    let h = upper / panels as f64;
    let mut nodes = Vec::new();
    for p in 0..panels {
        let lo = p as f64 * h;
        rule.for_each_node(lo, lo + h, |x, w| nodes.push((x, w * weight(x))));
    }
    (-RAW_HALF..=RAW_HALF)
        .map(|n| {
            let m = (n + shift) as f64 * 0.5;
            SQRT_2 * nodes.iter().map(|(x, w)| w * (m * x).cos()).sum::<f64>()
        })
        .collect()
}

impl TwoScaleFilters {
    pub fn compute() -> Self {
        let low = cosine_coefficients(|x| phi_hat(x) * phi_hat(0.5 * x), PHI_SUPPORT, 0);
        let high = cosine_coefficients(|x| INV_SQRT_2PI * psi_band(x) * phi_hat(0.5 * x), PSI_SUPPORT, 1);
        Self {
            lowpass: Filter::trimmed(-RAW_HALF, low, TAIL_MASS),
            highpass: Filter::trimmed(-RAW_HALF, high, TAIL_MASS),
        }
    }

    pub fn shared() -> &'static TwoScaleFilters {
        static F: OnceLock<TwoScaleFilters> = OnceLock::new();
        F.get_or_init(TwoScaleFilters::compute)
    }

    /// Coarse indices `k` contributing to fine index `m`.
    pub fn coarse_range(&self, m_lo: i64, m_hi: i64) -> (i64, i64) {
        let first = self.lowpass.first().min(self.highpass.first());
        let last = self.lowpass.last().max(self.highpass.last());
        ((m_lo - last).div_euclid(2), (m_hi - first).div_euclid(2) + 1)
    }

    /// One synthesis step on windows: fine[m] for m in [m_lo, m_hi].
    pub fn synthesize(&self, coarse_lo: i64, scaling: &[f64], detail: &[f64], m_lo: i64, m_hi: i64) -> Vec<f64> {
        (m_lo..=m_hi)
            .map(|m| {
                let mut s = 0.0;
                for (i, (a, b)) in scaling.iter().zip(detail).enumerate() {
                    let k = coarse_lo + i as i64;
                    let n = m - 2 * k;
                    s += self.lowpass.get(n) * a + self.highpass.get(n) * b;
                }
                s
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowpass_is_orthonormal_filter() {
        let f = TwoScaleFilters::shared();
        let e: f64 = f.lowpass.taps.iter().map(|v| v * v).sum();
        assert!((e - 1.0).abs() < 1e-10, "{e}");
        let s: f64 = f.lowpass.taps.iter().sum();
        assert!((s - SQRT_2).abs() < 1e-9, "{s}");
        // Double shifts are orthogonal.
        for shift in 1..6 {
            let c: f64 = (f.lowpass.first()..=f.lowpass.last())
                .map(|n| f.lowpass.get(n) * f.lowpass.get(n + 2 * shift))
                .sum();
            assert!(c.abs() < 1e-10);
            let d: f64 = (f.lowpass.first()..=f.lowpass.last())
                .map(|n| f.lowpass.get(n) * f.highpass.get(n + 2 * shift))
                .sum();
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn highpass_has_unit_energy_and_zero_mean() {
        let f = TwoScaleFilters::shared();
        let e: f64 = f.highpass.taps.iter().map(|v| v * v).sum();
        assert!((e - 1.0).abs() < 1e-10);
        let s: f64 = f.highpass.taps.iter().sum();
        assert!(s.abs() < 1e-9, "{s} {} {}", f.highpass.first(), f.highpass.last());
    }
}
