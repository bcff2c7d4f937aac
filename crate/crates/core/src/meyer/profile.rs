//! Fourier-side profiles of the Meyer scaling function and wavelet.
//!
//! Transform convention: `f^(xi) = (2 pi)^{-1/2} \int e^{-i xi x} f(x) dx`.

use num_complex::Complex64;
use std::f64::consts::PI;

pub(crate) const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Upper edge of the support of the scaling profile.
pub const PHI_SUPPORT: f64 = 4.0 * PI / 3.0;
/// Upper edge of the support of the wavelet profile.
pub const PSI_SUPPORT: f64 = 8.0 * PI / 3.0;

/// Smooth step: 0 below 0, 1 above 1, and `nu(x) + nu(1 - x) = 1`.
pub fn nu(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
    }
}

/// Real, even scaling profile `phi^`.
pub fn phi_hat(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= 2.0 * PI / 3.0 {
        INV_SQRT_2PI
    } else if a < PHI_SUPPORT {
        INV_SQRT_2PI * (0.5 * PI * nu(3.0 * a / (2.0 * PI) - 1.0)).cos()
    } else {
        0.0
    }
}

/// Even modulus of the wavelet profile, without the `(2 pi)^{-1/2}` factor.
pub fn psi_band(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= 2.0 * PI / 3.0 || a >= PSI_SUPPORT {
        0.0
    } else if a <= 4.0 * PI / 3.0 {
        (0.5 * PI * nu(3.0 * a / (2.0 * PI) - 1.0)).sin()
    } else {
        (0.5 * PI * nu(3.0 * a / (4.0 * PI) - 1.0)).cos()
    }
}

/// Wavelet profile `psi^(xi) = (2 pi)^{-1/2} e^{i xi / 2} b(xi)`.
pub fn psi_hat(xi: f64) -> Complex64 {
    let b = psi_band(xi);
    if b == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(INV_SQRT_2PI * b, 0.5 * xi)
}

/// `1 - e^{i xi}` evaluated without cancellation near `xi = 0`.
pub fn one_minus_expi(xi: f64) -> Complex64 {
    let s = (0.5 * xi).sin();
    Complex64::new(2.0 * s * s, -xi.sin())
}

/// Principal power `(1 - e^{i xi})^{-delta}` for `xi` not a multiple of `2 pi`.
pub fn farima_symbol(xi: f64, delta: f64) -> Complex64 {
    if delta == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let z = one_minus_expi(xi);
    let r = z.norm();
    let arg = z.im.atan2(z.re);
    Complex64::from_polar(r.powf(-delta), -delta * arg)
}

/// Multiplier `(i xi)^{1/2 - h}` with the principal branch.
pub fn fractional_derivative_symbol(xi: f64, h: f64) -> Complex64 {
    if xi == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let a = 0.5 - h;
    Complex64::from_polar(xi.abs().powf(a), a * 0.5 * PI * xi.signum())
}

/// Multiplier `e^{-i delta xi / 2} (sin(xi/2) / (xi/2))^delta`, equal to 1 at 0.
pub fn fractional_difference_symbol(xi: f64, delta: f64) -> Complex64 {
    let half = 0.5 * xi;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    // sinc is positive on the supports used here (|xi| < 2 pi).
    Complex64::from_polar(sinc.abs().powf(delta), -delta * half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn nu_is_smooth_step() {
        assert_eq!(nu(0.0), 0.0);
        assert_eq!(nu(1.0), 1.0);
        assert_relative_eq!(nu(0.5), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn psi_band_continuous_at_breakpoints() {
        let eps = 1e-9;
        for x in [2.0 * PI / 3.0, 4.0 * PI / 3.0, 8.0 * PI / 3.0] {
            assert!((psi_band(x - eps) - psi_band(x + eps)).abs() < 1e-6);
        }
    }

    #[test]
    fn farima_symbol_matches_direct_power() {
        for &xi in &[0.3, 1.0, 2.5, -0.7, -3.0] {
            let z = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, xi);
            let direct = z.powf(-0.3);
            let got = farima_symbol(xi, 0.3);
            assert_relative_eq!(got.re, direct.re, epsilon = 1e-13);
            assert_relative_eq!(got.im, direct.im, epsilon = 1e-13);
        }
    }

    proptest! {
        #[test]
        fn nu_symmetry(x in -0.5f64..1.5) {
            prop_assert!((nu(x) + nu(1.0 - x) - 1.0).abs() < 1e-13);
        }

        #[test]
        fn phi_partition_of_unity(xi in -1.0f64..1.0) {
            // |phi^(xi)|^2 + |phi^(xi + 2pi)|^2 = 1/(2 pi) on the overlap region.
            let x = PI * xi;
            let s = phi_hat(x).powi(2) + phi_hat(x + 2.0 * PI).powi(2) + phi_hat(x - 2.0 * PI).powi(2);
            prop_assert!((s * 2.0 * PI - 1.0).abs() < 1e-12);
        }

        #[test]
        fn scaling_refinement(xi in 0.0f64..3.0) {
            // |phi^(xi)|^2 + |psi^(xi)|^2 = |phi^(xi/2)|^2.
            let lhs = phi_hat(xi).powi(2) + psi_hat(xi).norm_sqr();
            prop_assert!((lhs - phi_hat(0.5 * xi).powi(2)).abs() < 1e-13);
        }
    }
}
