//! Generalized FARIMA variables `sigma_{J,k}` by two independent routes.

use super::variables::mu_with;
use super::wick::{wick_partition_route, wick_product};
use crate::error::{Error, Result};
use crate::farima::{farima_covariance, gamma_coefficients, CovarianceTable, FarimaFilter, GammaCoefficients};
use crate::field::GaussianField;
use crate::hurst::HurstVector;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Maximal number of terms in the d-fold truncated sum.
pub const MAX_SIGMA_TERMS: u128 = 2_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaRoute {
    /// d-fold truncated sum of `prod gamma * mu`.
    Truncated,
    /// Wick product of FARIMA values with exact covariances.
    Farima,
}

/// Route (a) on a lookup of `g^phi_{J, .}`.
pub fn sigma_truncated_with<G: Fn(i64) -> f64>(k: &[i64], gammas: &[GammaCoefficients], g: G) -> Result<f64> {
    let d = k.len();
    if gammas.len() != d {
        return Err(Error::Precondition("one gamma sequence per axis required".into()));
    }
    let terms: u128 = gammas.iter().map(|c| c.values.len() as u128).product();
    if terms > MAX_SIGMA_TERMS {
        return Err(Error::Budget(format!("{terms} terms exceed {MAX_SIGMA_TERMS}")));
    }
    let lo = k.iter().zip(gammas).map(|(kk, c)| kk - c.order() as i64).min().unwrap_or(0);
    let hi = *k.iter().max().unwrap_or(&0);
    let window: Vec<f64> = (lo..=hi).map(&g).collect();
    let lookup = |x: i64| window[(x - lo) as usize];
    let mut p = vec![0usize; d];
    let mut idx = k.to_vec();
    let mut total = 0.0;
    loop {
        let weight: f64 = p.iter().zip(gammas).map(|(&pp, c)| c.values[pp]).product();
        if weight != 0.0 {
            total += weight * mu_with(&idx, lookup);
        }
        let mut axis = 0;
        loop {
            if axis == d {
                return Ok(total);
            }
            p[axis] += 1;
            if p[axis] < gammas[axis].values.len() {
                idx[axis] = k[axis] - p[axis] as i64;
                break;
            }
            p[axis] = 0;
            idx[axis] = k[axis];
            axis += 1;
        }
    }
}

fn gamma_set(h: &HurstVector, order: usize) -> Result<Vec<GammaCoefficients>> {
    h.deltas().iter().map(|&dl| gamma_coefficients(dl, order)).collect()
}

/// Route (a): `sigma_{J,k} = sum_{p in [0,P]^d} prod gamma_{p_l} mu_{J,k-p}`.
pub fn sigma(level: i32, k: &[i64], h: &HurstVector, field: &GaussianField, order: usize) -> Result<f64> {
    check_dims(k, h)?;
    let gammas = gamma_set(h, order)?;
    let lo = k.iter().min().unwrap() - order as i64;
    let hi = *k.iter().max().unwrap();
    let g = field.scaling(level, lo, hi);
    sigma_truncated_with(k, &gammas, |x| g[(x - lo) as usize])
}

fn check_dims(k: &[i64], h: &HurstVector) -> Result<()> {
    if k.len() != h.d() {
        return Err(Error::Precondition(format!("index of length {} for d = {}", k.len(), h.d())));
    }
    Ok(())
}

/// FARIMA values `Z^{(delta_l)}_{J,k_l}` truncated at `order`.
pub fn farima_values(level: i32, k: &[i64], h: &HurstVector, field: &GaussianField, order: usize) -> Result<Vec<f64>> {
    let gammas = gamma_set(h, order)?;
    k.iter()
        .zip(&gammas)
        .map(|(&kk, gam)| {
            let noise = field.scaling(level, kk - order as i64, kk);
            Ok(FarimaFilter::new(gam.clone(), 1).apply(&noise)?[0])
        })
        .collect()
}

/// Route (b): partition sum with exact covariances and truncated FARIMA values.
pub fn sigma_farima_route(level: i32, k: &[i64], h: &HurstVector, field: &GaussianField, order: usize) -> Result<f64> {
    check_dims(k, h)?;
    if k.len() > 6 {
        return Err(Error::Size(format!("partition route limited to d <= 6, got {}", k.len())));
    }
    let z = farima_values(level, k, h, field, order)?;
    let deltas = h.deltas();
    let cov = exact_covariances(k, &deltas)?;
    wick_partition_route(&z, |a, b| cov[a][b], 6)
}

fn exact_covariances(k: &[i64], deltas: &[f64]) -> Result<Vec<Vec<f64>>> {
    let d = k.len();
    let mut c = vec![vec![0.0; d]; d];
    for a in 0..d {
        for b in a..d {
            let v = farima_covariance(deltas[a], deltas[b], k[a] - k[b])?;
            c[a][b] = v;
            c[b][a] = v;
        }
    }
    Ok(c)
}

/// `sum_p gamma^a_{p + lag} gamma^b_p` over the truncated supports.
pub fn truncated_covariance(a: &GammaCoefficients, b: &GammaCoefficients, lag: i64) -> f64 {
    let pa = a.order() as i64;
    let pb = b.order() as i64;
    let lo = 0.max(-lag);
    let hi = pb.min(pa - lag);
    (lo..=hi).map(|p| a.values[(p + lag) as usize] * b.values[p as usize]).sum()
}

/// Bound on `|route (a) - route (b)|` from covariance truncation:
/// `sum over partitions with pairs of |prod C - prod C_P| prod |Z|`.
pub fn sigma_truncation_tolerance(level: i32, k: &[i64], h: &HurstVector, field: &GaussianField, order: usize) -> Result<f64> {
    check_dims(k, h)?;
    let z = farima_values(level, k, h, field, order)?;
    let deltas = h.deltas();
    let exact = exact_covariances(k, &deltas)?;
    let gammas = gamma_set(h, order)?;
    let d = k.len();
    let ground: Vec<usize> = (0..d).collect();
    let mut tol = 0.0;
    for m in 1..=d / 2 {
        for p in super::partition::pair_partitions(&ground, m)? {
            let mut ce = 1.0;
            let mut ct = 1.0;
            for &(a, b) in &p.pairs {
                ce *= exact[a][b];
                ct *= truncated_covariance(&gammas[a], &gammas[b], k[a] - k[b]);
            }
            let zs: f64 = p.singletons.iter().map(|&s| z[s].abs()).product();
            tol += (ce - ct).abs() * zs;
        }
    }
    Ok(tol * (1.0 + 1e-9) + 1e-12)
}

/// `sigma_{J,k}` over the box `[k_lo, k_hi]^d`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChaosCoefficients {
    pub level: i32,
    pub d: usize,
    pub k_lo: i64,
    pub k_hi: i64,
    pub route: SigmaRoute,
    pub truncation: usize,
    /// Row-major values, last axis fastest.
    pub values: Vec<f64>,
    /// `max |sigma| / log(3 + J + |k|_inf)^{d/2}` over the window.
    pub log_bound_constant: f64,
}

impl ChaosCoefficients {
    pub fn indices(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let w = (self.k_hi - self.k_lo + 1) as usize;
        (0..self.values.len()).map(move |mut i| {
            let mut k = vec![0i64; self.d];
            for slot in k.iter_mut().rev() {
                *slot = self.k_lo + (i % w) as i64;
                i /= w;
            }
            k
        })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let cols: Vec<String> = (1..=self.d).map(|l| format!("k_{l}")).collect();
        writeln!(w, "{},sigma", cols.join(","))?;
        for (k, v) in self.indices().zip(&self.values) {
            let ks: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{},{:.16e}", ks.join(","), v)?;
        }
        Ok(())
    }
}

pub fn sigma_window(
    level: i32,
    h: &HurstVector,
    k_lo: i64,
    k_hi: i64,
    field: &GaussianField,
    order: usize,
    route: SigmaRoute,
) -> Result<ChaosCoefficients> {
    if k_hi < k_lo {
        return Err(Error::Precondition("empty window".into()));
    }
    let d = h.d();
    let w = (k_hi - k_lo + 1) as usize;
    let count = (w as u128).pow(d as u32);
    if count > 50_000_000 {
        return Err(Error::Size(format!("window of {count} coefficients")));
    }
    let mut values = Vec::with_capacity(count as usize);
    let deltas = h.deltas();
    let gammas = gamma_set(h, order)?;
    let g = field.scaling(level, k_lo - order as i64, k_hi);
    let g_at = |x: i64| g[(x - k_lo + order as i64) as usize];
    let z: Vec<Vec<f64>> = gammas
        .iter()
        .map(|gam| FarimaFilter::new(gam.clone(), w).apply(&g))
        .collect::<Result<_>>()?;
    let span = k_hi - k_lo;
    let cov = CovarianceTable::new(&deltas, span)?;
    let mut k = vec![k_lo; d];
    for _ in 0..count {
        let v = match route {
            SigmaRoute::Truncated => sigma_truncated_with(&k, &gammas, g_at)?,
            SigmaRoute::Farima => {
                let zs: Vec<f64> = k.iter().enumerate().map(|(l, &kk)| z[l][(kk - k_lo) as usize]).collect();
                wick_product(&zs, |a, b| cov.get(a, b, k[a] - k[b]))
            }
        };
        values.push(v);
        for slot in k.iter_mut().rev() {
            *slot += 1;
            if *slot <= k_hi {
                break;
            }
            *slot = k_lo;
        }
    }
    let mut out = ChaosCoefficients {
        level,
        d,
        k_lo,
        k_hi,
        route,
        truncation: order,
        values,
        log_bound_constant: 0.0,
    };
    out.log_bound_constant = out
        .indices()
        .zip(&out.values)
        .map(|(k, v)| {
            let kn = k.iter().map(|x| x.abs()).max().unwrap_or(0) as f64;
            v.abs() / (3.0 + level.max(0) as f64 + kn).ln().powf(d as f64 / 2.0)
        })
        .fold(0.0, f64::max);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hv(h: &[f64]) -> HurstVector {
        HurstVector::new(h.to_vec()).unwrap()
    }

    #[test]
    fn d1_is_farima_value() {
        let f = GaussianField::new(5, 0);
        let h = hv(&[0.7]);
        let s = sigma(1, &[3], &h, &f, 64).unwrap();
        let z = farima_values(1, &[3], &h, &f, 64).unwrap()[0];
        assert!((s - z).abs() < 1e-12);
        let b = sigma_farima_route(1, &[3], &h, &f, 64).unwrap();
        assert!((b - z).abs() < 1e-12);
    }

    #[test]
    fn routes_agree_within_truncation_tolerance() {
        let f = GaussianField::new(9, 0);
        let h = hv(&[0.8, 0.85]);
        for k in [[0i64, 0], [2, -1], [5, 5]] {
            let a = sigma(0, &k, &h, &f, 128).unwrap();
            let b = sigma_farima_route(0, &k, &h, &f, 128).unwrap();
            let tol = sigma_truncation_tolerance(0, &k, &h, &f, 128).unwrap();
            assert!((a - b).abs() <= tol, "{k:?}: |{a} - {b}| > {tol}");
        }
    }

    #[test]
    fn truncated_covariance_matches_direct_sum() {
        let a = gamma_coefficients(0.2, 10).unwrap();
        let b = gamma_coefficients(0.3, 12).unwrap();
        for lag in -5i64..=5 {
            let mut s = 0.0;
            for p in 0..=10i64 {
                for q in 0..=12i64 {
                    if p - q == lag {
                        s += a.values[p as usize] * b.values[q as usize];
                    }
                }
            }
            assert!((truncated_covariance(&a, &b, lag) - s).abs() < 1e-15);
        }
    }

    #[test]
    fn window_routes_agree_exactly_with_point_routes() {
        let f = GaussianField::new(4, 1);
        let h = hv(&[0.8, 0.85]);
        let w = sigma_window(1, &h, -2, 2, &f, 32, SigmaRoute::Truncated).unwrap();
        for (k, v) in w.indices().zip(&w.values) {
            assert!((sigma(1, &k, &h, &f, 32).unwrap() - v).abs() < 1e-12);
        }
        let wb = sigma_window(1, &h, -2, 2, &f, 32, SigmaRoute::Farima).unwrap();
        assert!(wb.log_bound_constant > 0.0);
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 26);
    }

    #[test]
    fn budget_enforced() {
        let f = GaussianField::new(4, 0);
        let h = hv(&[0.9, 0.9, 0.9]);
        assert!(matches!(sigma(0, &[0, 0, 0], &h, &f, 1 << 12), Err(Error::Budget(_))));
    }
}
