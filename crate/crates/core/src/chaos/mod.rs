//! Hermite polynomials, pair partitions and the chaotic variables `mu`, `epsilon`, `sigma`.

pub mod hermite;
pub mod multiset;
pub mod partition;
pub mod sigma;
pub mod variables;
pub mod wick;

pub use hermite::{hermite, hermite_coefficients_fit, hermite_partition_coeff};
pub use multiset::MultisetKey;
pub use partition::{pair_partitions, PairPartition};
pub use sigma::{
    farima_values, sigma, sigma_farima_route, sigma_truncated_with, sigma_truncation_tolerance, sigma_window,
    truncated_covariance, ChaosCoefficients, SigmaRoute,
};
pub use variables::{correlation, epsilon, mu, mu_partition_route, mu_partition_route_with, mu_with};
pub use wick::{wick_partition_route, wick_product};
