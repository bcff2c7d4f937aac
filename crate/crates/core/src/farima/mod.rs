//! FARIMA filters driven by scaling coefficients.

pub mod covariance;
pub mod gamma;
pub mod sequence;

pub use covariance::{farima_autocovariance, farima_covariance, CovarianceTable};
pub use gamma::{
    gamma_coefficients, gamma_fourier, gamma_fourier_identity_residual, required_order, tail_constant, tail_energy,
    GammaCoefficients,
};
pub use sequence::{farima_sequence, FarimaFilter};
