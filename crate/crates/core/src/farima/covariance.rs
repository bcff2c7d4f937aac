//! Cross-covariances of jointly driven FARIMA sequences.
//!
//! `cov(delta, delta', l) = E[Z^delta_{k + l} Z^delta'_k]
//!   = (1/2pi) \int_0^{2pi} e^{i l xi} (1 - e^{-i xi})^{-delta} (1 - e^{i xi})^{-delta'} d xi`.

use super::gamma::check_delta;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_graded_dist, GaussLegendre, GradedMesh};
use statrs::function::gamma::{gamma, ln_gamma};
use std::collections::HashMap;
use std::f64::consts::PI;

pub fn farima_covariance(delta: f64, delta_prime: f64, lag: i64) -> Result<f64> {
    check_delta(delta)?;
    check_delta(delta_prime)?;
    let s = delta + delta_prime;
    let d = delta - delta_prime;
    let l = lag as f64;
    let rule = GaussLegendre::order16();
    let sing = (s > 0.0).then_some(s);
    let mesh = GradedMesh::new(sing, sing, (1.0 / (1.0 + lag.unsigned_abs() as f64)).min(0.25));
    // sin(xi/2) = sin(da/2) = sin(db/2) with da, db the endpoint distances.
    let modulus = |da: f64, db: f64| (2.0 * (0.5 * da.min(db)).sin()).powf(-s);
    let phase = |x: f64| l * x + 0.5 * d * (x - PI);
    let re = integrate_graded_dist(rule, |x, da, db| modulus(da, db) * phase(x).cos(), 0.0, 2.0 * PI, &mesh);
    let im = integrate_graded_dist(rule, |x, da, db| modulus(da, db) * phase(x).sin(), 0.0, 2.0 * PI, &mesh);
    let (re, im) = (re / (2.0 * PI), im / (2.0 * PI));
    if im.abs() > 1e-10 {
        return Err(Error::Numerical(format!("covariance has imaginary part {im:e}")));
    }
    Ok(re)
}

/// Closed form for equal orders: `Gamma(1-2d) Gamma(l+d) / (Gamma(d) Gamma(1-d) Gamma(l+1-d))`.
pub fn farima_autocovariance(delta: f64, lag: i64) -> Result<f64> {
    check_delta(delta)?;
    if delta == 0.0 {
        return Ok(if lag == 0 { 1.0 } else { 0.0 });
    }
    let l = lag.unsigned_abs() as f64;
    let ratio = if l + delta > 0.0 {
        (ln_gamma(l + delta) - ln_gamma(l + 1.0 - delta)).exp()
    } else {
        gamma(l + delta) / gamma(l + 1.0 - delta)
    };
    Ok(gamma(1.0 - 2.0 * delta) / (gamma(delta) * gamma(1.0 - delta)) * ratio)
}

/// Covariances for a fixed list of orders and lags in `[-max_lag, max_lag]`.
#[derive(Debug, Clone)]
pub struct CovarianceTable {
    pub deltas: Vec<f64>,
    pub max_lag: i64,
    values: HashMap<(usize, usize), Vec<f64>>,
}

impl CovarianceTable {
    pub fn new(deltas: &[f64], max_lag: i64) -> Result<Self> {
        let mut values = HashMap::new();
        let mut memo: HashMap<(u64, u64), Vec<f64>> = HashMap::new();
        for (a, &da) in deltas.iter().enumerate() {
            for (b, &db) in deltas.iter().enumerate() {
                let key = (da.to_bits(), db.to_bits());
                if !memo.contains_key(&key) {
                    let rev = (db.to_bits(), da.to_bits());
                    let v = if let Some(r) = memo.get(&rev) {
                        r.iter().rev().copied().collect()
                    } else {
                        (-max_lag..=max_lag)
                            .map(|l| farima_covariance(da, db, l))
                            .collect::<Result<Vec<_>>>()?
                    };
                    memo.insert(key, v);
                }
                values.insert((a, b), memo[&key].clone());
            }
        }
        Ok(Self { deltas: deltas.to_vec(), max_lag, values })
    }

    /// `E[Z^{(a)}_{k} Z^{(b)}_{k'}]` with `lag = k - k'`.
    #[inline]
    pub fn get(&self, a: usize, b: usize, lag: i64) -> f64 {
        assert!(lag.abs() <= self.max_lag, "lag {lag} outside covariance table");
        self.values[&(a, b)][(lag + self.max_lag) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_orders_match_closed_form() {
        for delta in [0.05, 0.25, 0.45] {
            for lag in [0i64, 1, 7, -12, 40] {
                let q = farima_covariance(delta, delta, lag).unwrap();
                let c = farima_autocovariance(delta, lag).unwrap();
                assert!((q - c).abs() < 1e-9, "delta {delta} lag {lag}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn zero_order_is_white_noise() {
        assert!((farima_covariance(0.0, 0.0, 0).unwrap() - 1.0).abs() < 1e-13);
        assert!(farima_covariance(0.0, 0.0, 3).unwrap().abs() < 1e-13);
    }

    #[test]
    fn swap_reverses_lag() {
        let a = farima_covariance(0.1, 0.35, 4).unwrap();
        let b = farima_covariance(0.35, 0.1, -4).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn table_lookup() {
        let t = CovarianceTable::new(&[0.2, 0.3], 5).unwrap();
        assert!((t.get(0, 1, 2) - farima_covariance(0.2, 0.3, 2).unwrap()).abs() < 1e-15);
        assert!((t.get(1, 0, -2) - t.get(0, 1, 2)).abs() < 1e-15);
    }
}
