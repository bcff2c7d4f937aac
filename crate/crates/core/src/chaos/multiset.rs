use serde::{Deserialize, Serialize};

/// Canonical multiset of index pairs `(j, k)` with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultisetKey {
    pub entries: Vec<((i64, i64), u32)>,
}

impl MultisetKey {
    pub fn new(j: &[i64], k: &[i64]) -> Self {
        assert_eq!(j.len(), k.len(), "index vectors of different length");
        let mut pairs: Vec<(i64, i64)> = j.iter().copied().zip(k.iter().copied()).collect();
        pairs.sort_unstable();
        let mut entries: Vec<((i64, i64), u32)> = Vec::new();
        for p in pairs {
            match entries.last_mut() {
                Some((q, n)) if *q == p => *n += 1,
                _ => entries.push((p, 1)),
            }
        }
        Self { entries }
    }

    /// Multiset of single indices (all at the same level).
    pub fn of_indices(k: &[i64]) -> Self {
        Self::new(&vec![0; k.len()], k)
    }

    pub fn order(&self) -> u32 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// `prod n_l!`.
    pub fn factorial_product(&self) -> f64 {
        self.entries.iter().map(|&(_, n)| (1..=n).map(f64::from).product::<f64>()).product()
    }
}
