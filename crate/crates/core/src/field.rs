//! Counter-based Gaussian coefficients `g^phi_{j,k}` and `g^psi_{j,k}`.
//!
//! Values are pure functions of `(seed, replica, kind, level, block)`, so any
//! window can be regenerated in any order or thread. Scaling coefficients above
//! the base level are synthesized from coarser levels through the two-scale
//! filters, which keeps all levels driven by the same white noise.

use crate::meyer::TwoScaleFilters;
use rand::rngs::SmallRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

const BLOCK: i64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Scaling,
    Detail,
}

#[derive(Debug, Clone, Copy)]
pub struct GaussianField {
    pub seed: u64,
    pub replica: u64,
    pub base_level: i32,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(parts: &[u64]) -> u64 {
    parts.iter().fold(0x6A09_E667_F3BC_C909, |h, &p| splitmix(h ^ p))
}

impl GaussianField {
    pub fn new(seed: u64, base_level: i32) -> Self {
        Self { seed, replica: 0, base_level }
    }

    pub fn replica(&self, r: u64) -> Self {
        Self { replica: r, ..*self }
    }

    fn block(&self, kind: CoefficientKind, level: i32, block: i64) -> [f64; BLOCK as usize] {
        let tag = match kind {
            CoefficientKind::Scaling => 1,
            CoefficientKind::Detail => 2,
        };
        let key = mix(&[self.seed, self.replica, tag, level as i64 as u64, block as u64]);
        let mut rng = SmallRng::seed_from_u64(key);
        let mut out = [0.0; BLOCK as usize];
        for v in out.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        out
    }

    /// Independent draws for indices `k_lo..=k_hi`.
    pub fn raw(&self, kind: CoefficientKind, level: i32, k_lo: i64, k_hi: i64) -> Vec<f64> {
        let mut out = Vec::with_capacity((k_hi - k_lo + 1).max(0) as usize);
        let mut k = k_lo;
        while k <= k_hi {
            let b = k.div_euclid(BLOCK);
            let vals = self.block(kind, level, b);
            let end = ((b + 1) * BLOCK - 1).min(k_hi);
            for kk in k..=end {
                out.push(vals[(kk - b * BLOCK) as usize]);
            }
            k = end + 1;
        }
        out
    }

    pub fn detail(&self, level: i32, k_lo: i64, k_hi: i64) -> Vec<f64> {
        self.raw(CoefficientKind::Detail, level, k_lo, k_hi)
    }

    /// Scaling coefficients at `level` for `k_lo..=k_hi`.
    pub fn scaling(&self, level: i32, k_lo: i64, k_hi: i64) -> Vec<f64> {
        if level <= self.base_level {
            return self.raw(CoefficientKind::Scaling, level, k_lo, k_hi);
        }
        let f = TwoScaleFilters::shared();
        let (c_lo, c_hi) = f.coarse_range(k_lo, k_hi);
        let coarse = self.scaling(level - 1, c_lo, c_hi);
        let detail = self.detail(level - 1, c_lo, c_hi);
        f.synthesize(c_lo, &coarse, &detail, k_lo, k_hi)
    }
}
