use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Admissible Hurst vector: every `h` in (1/2, 1) and `sum h > d - 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HurstVector {
    h: Vec<f64>,
}

impl HurstVector {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::Admissibility("empty Hurst vector".into()));
        }
        if let Some(bad) = h.iter().find(|v| !(**v > 0.5 && **v < 1.0)) {
            return Err(Error::Admissibility(format!("h = {bad}")));
        }
        let d = h.len() as f64;
        let s: f64 = h.iter().sum();
        if s <= d - 0.5 {
            return Err(Error::Admissibility(format!("sum h = {s} <= {}", d - 0.5)));
        }
        Ok(Self { h })
    }

    pub fn d(&self) -> usize {
        self.h.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    pub fn sum(&self) -> f64 {
        self.h.iter().sum()
    }

    /// FARIMA orders `delta_l = h_l - 1/2`.
    pub fn deltas(&self) -> Vec<f64> {
        self.h.iter().map(|h| h - 0.5).collect()
    }

    /// Self-similarity exponent `H = sum h - d + 1`.
    pub fn self_similarity_exponent(&self) -> f64 {
        self.sum() - self.d() as f64 + 1.0
    }
}

impl TryFrom<Vec<f64>> for HurstVector {
    type Error = Error;
    fn try_from(h: Vec<f64>) -> Result<Self> {
        HurstVector::new(h)
    }
}

impl From<HurstVector> for Vec<f64> {
    fn from(h: HurstVector) -> Vec<f64> {
        h.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exponents() {
        assert!((HurstVector::new(vec![0.7]).unwrap().self_similarity_exponent() - 0.7).abs() < 1e-15);
        let h = HurstVector::new(vec![0.8, 0.85]).unwrap();
        assert!((h.self_similarity_exponent() - 0.65).abs() < 1e-14);
    }

    #[test]
    fn inadmissible() {
        assert!(HurstVector::new(vec![0.5]).is_err());
        assert!(HurstVector::new(vec![0.6, 0.6, 0.6]).is_err());
        assert!(HurstVector::new(vec![]).is_err());
    }

    proptest! {
        #[test]
        fn admissible_exponent_in_range(h in proptest::collection::vec(0.5001f64..0.9999, 1..5)) {
            if let Ok(hv) = HurstVector::new(h) {
                let e = hv.self_similarity_exponent();
                prop_assert!(e > 0.5 && e < 1.0);
            }
        }
    }
}
