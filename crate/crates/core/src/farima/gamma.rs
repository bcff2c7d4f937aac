//! Moving-average coefficients of the fractional integration filter
//! `(1 - z)^{-delta} = sum_p gamma_p z^p`.

use crate::error::{Error, Result};
use crate::meyer::profile::farima_symbol;
use crate::quadrature::{integrate_graded_dist, GaussLegendre, GradedMesh};
use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct GammaCoefficients {
    pub delta: f64,
    /// `values[p] = gamma_p` for `p = 0..=P`.
    pub values: Vec<f64>,
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta.abs() >= 0.5 {
        return Err(Error::Domain(format!("|delta| = {} must be < 1/2", delta.abs())));
    }
    Ok(())
}

/// `gamma_0 = 1`, `gamma_{p+1} = gamma_p (p + delta) / (p + 1)`.
pub fn gamma_coefficients(delta: f64, order: usize) -> Result<GammaCoefficients> {
    check_delta(delta)?;
    let mut values = Vec::with_capacity(order + 1);
    let mut g = 1.0;
    values.push(g);
    for p in 0..order {
        g *= (p as f64 + delta) / (p as f64 + 1.0);
        values.push(g);
    }
    Ok(GammaCoefficients { delta, values })
}

/// Constant `a_delta = 1 / Gamma(delta)` in `gamma_p ~ a_delta p^{delta - 1}`.
pub fn tail_constant(delta: f64) -> f64 {
    if delta == 0.0 {
        0.0
    } else {
        1.0 / gamma(delta)
    }
}

impl GammaCoefficients {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    /// Leading-order estimate of `sum_{p > P} gamma_p^2`.
    pub fn tail_energy(&self) -> f64 {
        tail_energy(self.delta, self.order())
    }
}

pub fn tail_energy(delta: f64, order: usize) -> f64 {
    let a = tail_constant(delta);
    a * a * (order.max(1) as f64).powf(2.0 * delta - 1.0) / (1.0 - 2.0 * delta)
}

/// Smallest power-of-two order whose tail energy is below `tolerance`.
pub fn required_order(delta: f64, tolerance: f64, max_order: usize) -> Result<usize> {
    check_delta(delta)?;
    let mut p = 1usize;
    while tail_energy(delta, p) > tolerance {
        p *= 2;
        if p > max_order {
            return Err(Error::Budget(format!(
                "delta = {delta}: tail energy below {tolerance:e} needs order > {max_order}"
            )));
        }
    }
    Ok(p)
}

/// `(1/2pi) \int_0^{2pi} e^{-i p xi} (1 - e^{i xi})^{-delta} d xi`.
pub fn gamma_fourier(delta: f64, p: i64) -> Result<Complex64> {
    check_delta(delta)?;
    let rule = GaussLegendre::order16();
    let sing = (delta > 0.0).then_some(delta);
    let mesh = GradedMesh::new(sing, sing, (1.0 / (1.0 + p.unsigned_abs() as f64)).min(0.25));
    let pf = p as f64;
    // The integrand is 2 pi periodic; evaluate at the representative nearest 0.
    let value = |da: f64, db: f64| {
        let x = if da <= db { da } else { -db };
        Complex64::from_polar(1.0, -pf * x) * farima_symbol(x, delta)
    };
    let re = integrate_graded_dist(rule, |_, da, db| value(da, db).re, 0.0, 2.0 * PI, &mesh);
    let im = integrate_graded_dist(rule, |_, da, db| value(da, db).im, 0.0, 2.0 * PI, &mesh);
    Ok(Complex64::new(re, im) / (2.0 * PI))
}

/// `|gamma_fourier(delta, p) - gamma_p|` with `gamma_p = 0` for `p < 0`.
pub fn gamma_fourier_identity_residual(delta: f64, p: i64) -> Result<f64> {
    let q = gamma_fourier(delta, p)?;
    let exact = if p < 0 {
        0.0
    } else {
        gamma_coefficients(delta, p as usize)?.values[p as usize]
    };
    Ok((q - exact).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use statrs::function::gamma::ln_gamma;

    #[test]
    fn first_terms() {
        let g = gamma_coefficients(0.25, 3).unwrap();
        assert_eq!(g.values[0], 1.0);
        assert_eq!(g.values[1], 0.25);
        assert!((g.values[2] - 0.25 * 1.25 / 2.0).abs() < 1e-16);
    }

    #[test]
    fn domain_rejected() {
        assert!(gamma_coefficients(0.5, 3).is_err());
        assert!(gamma_coefficients(-0.6, 3).is_err());
    }

    #[test]
    fn budget_error_when_order_too_large() {
        assert!(matches!(required_order(0.45, 1e-12, 1 << 20), Err(Error::Budget(_))));
        assert!(required_order(0.05, 1e-3, 1 << 20).is_ok());
    }

    #[test]
    fn fourier_identity_small_p() {
        for p in [-3, 0, 1, 5] {
            assert!(gamma_fourier_identity_residual(0.3, p).unwrap() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn matches_gamma_function_ratio(delta in -0.45f64..0.45, p in 1usize..2000) {
            prop_assume!(delta.abs() > 1e-3);
            let g = gamma_coefficients(delta, p).unwrap().values[p];
            // gamma_p = Gamma(p + delta) / (Gamma(delta) Gamma(p + 1)).
            let lg = ln_gamma(p as f64 + delta) - ln_gamma(p as f64 + 1.0);
            let expected = lg.exp() * tail_constant(delta);
            prop_assert!((g / expected - 1.0).abs() < 1e-9);
        }
    }
}
