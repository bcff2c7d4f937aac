//! Hermite-product random variables over multiset index structures.

use super::hermite::hermite;
use super::multiset::MultisetKey;
use super::wick::wick_partition_route;
use crate::error::Result;
use crate::field::GaussianField;

/// `mu_{J,k} = prod H_{n_l}(g^phi_{J, k~_l})` given a lookup for `g^phi_{J, .}`.
pub fn mu_with<G: Fn(i64) -> f64>(k: &[i64], g: G) -> f64 {
    MultisetKey::of_indices(k)
        .entries
        .iter()
        .map(|&((_, kk), n)| hermite(n as usize, g(kk)))
        .product()
}

/// Partition-sum form of `mu` with `E[g_a g_b] = 1{a = b}`.
pub fn mu_partition_route_with<G: Fn(i64) -> f64>(k: &[i64], g: G) -> Result<f64> {
    let values: Vec<f64> = k.iter().map(|&kk| g(kk)).collect();
    wick_partition_route(&values, |a, b| if k[a] == k[b] { 1.0 } else { 0.0 }, 6)
}

fn scaling_lookup(level: i32, k: &[i64], field: &GaussianField) -> impl Fn(i64) -> f64 {
    let lo = *k.iter().min().unwrap_or(&0);
    let hi = *k.iter().max().unwrap_or(&0);
    let vals = field.scaling(level, lo, hi);
    move |kk| vals[(kk - lo) as usize]
}

pub fn mu(level: i32, k: &[i64], field: &GaussianField) -> f64 {
    mu_with(k, scaling_lookup(level, k, field))
}

pub fn mu_partition_route(level: i32, k: &[i64], field: &GaussianField) -> Result<f64> {
    mu_partition_route_with(k, scaling_lookup(level, k, field))
}

/// `epsilon_{j,k} = prod H_{n_l}(g^psi_{j~_l, k~_l})`.
pub fn epsilon(j: &[i64], k: &[i64], field: &GaussianField) -> f64 {
    MultisetKey::new(j, k)
        .entries
        .iter()
        .map(|&((jj, kk), n)| hermite(n as usize, field.detail(jj as i32, kk, kk)[0]))
        .product()
}

/// `E[epsilon_{j,k} epsilon_{r,s}]`: `prod n_l!` for equal multisets, else 0.
pub fn correlation(jk: (&[i64], &[i64]), rs: (&[i64], &[i64])) -> f64 {
    let a = MultisetKey::new(jk.0, jk.1);
    let b = MultisetKey::new(rs.0, rs.1);
    if a == b {
        a.factorial_product()
    } else {
        0.0
    }
}
