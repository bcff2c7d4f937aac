//! Wick products of jointly Gaussian centred variables.

use super::partition::pair_partitions;
use crate::error::{Error, Result};

/// `:X_1 ... X_d:` from realized values and a covariance function, by the
/// recursion `:X_S: = X_i :X_{S-i}: - sum_j C_ij :X_{S-i-j}:`.
pub fn wick_product<C: Fn(usize, usize) -> f64>(values: &[f64], cov: C) -> f64 {
    let d = values.len();
    match d {
        0 => return 1.0,
        1 => return values[0],
        2 => return values[0] * values[1] - cov(0, 1),
        _ => {}
    }
    assert!(d <= 24, "Wick product of order {d} too large");
    let mut w = vec![0.0; 1 << d];
    w[0] = 1.0;
    for mask in 1usize..(1 << d) {
        let i = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask ^ (1 << i);
        let mut s = values[i] * w[rest];
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            s -= cov(i, j) * w[rest ^ (1 << j)];
            r &= r - 1;
        }
        w[mask] = s;
    }
    w[(1 << d) - 1]
}

/// The same product by explicit enumeration of pair partitions.
pub fn wick_partition_route<C: Fn(usize, usize) -> f64>(values: &[f64], cov: C, max_order: usize) -> Result<f64> {
    let d = values.len();
    if d > max_order {
        return Err(Error::Size(format!("partition route limited to d <= {max_order}, got {d}")));
    }
    let ground: Vec<usize> = (0..d).collect();
    let mut total = 0.0;
    for m in 0..=d / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for p in pair_partitions(&ground, m)? {
            let mut term = sign;
            for &(a, b) in &p.pairs {
                term *= cov(a, b);
            }
            for &s in &p.singletons {
                term *= values[s];
            }
            total += term;
        }
    }
    Ok(total)
}
