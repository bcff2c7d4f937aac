//! Validation suites: structural identities, Monte Carlo moment checks,
//! convergence rates, covariance and self-similarity diagnostics.

pub mod covariance;
pub mod identities;
pub mod moments;
pub mod rate;
pub mod report;
pub mod selfsim;
pub mod stats;
pub mod suites;

pub use covariance::{fbm_covariance_test, CovarianceConfig, CovarianceReport};
pub use identities::{chaos_route_suite, combinatorics_suite, farima_suite, meyer_suite, ChaosRouteConfig};
pub use moments::{moments_suite, MomentConfig};
pub use rate::{fullseries_rate_test, rate_test, FullRateConfig, RateConfig, RateReport};
pub use report::{Check, SuiteReport};
pub use selfsim::{selfsimilarity_test, SelfSimConfig, SelfSimReport};
pub use suites::{run_suite, SuiteName, SuiteOptions};
