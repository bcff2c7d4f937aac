//! Simulation of generalized Hermite processes through wavelet-type random series.

pub mod chaos;
pub mod error;
pub mod farima;
pub mod field;
pub mod hurst;
pub mod meyer;
pub mod process;
pub mod quadrature;
pub mod validation;

pub use error::{Error, Result};
pub use hurst::HurstVector;
