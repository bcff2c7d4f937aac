//! Partitions of a finite set into unordered pairs and singletons.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPartition {
    pub pairs: Vec<(usize, usize)>,
    pub singletons: Vec<usize>,
    pub ground_set: Vec<usize>,
}

impl PairPartition {
    pub fn is_valid(&self) -> bool {
        let mut seen: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        seen.extend(&self.singletons);
        seen.sort_unstable();
        let mut ground = self.ground_set.clone();
        ground.sort_unstable();
        seen == ground && self.pairs.iter().all(|(a, b)| a != b)
    }
}

/// Upper bound on enumerated partitions.
pub const MAX_PARTITIONS: u128 = 10_000_000;

/// All partitions of `ground` with exactly `m` pairs.
pub fn pair_partitions(ground: &[usize], m: usize) -> Result<Vec<PairPartition>> {
    let n = ground.len();
    if 2 * m > n {
        return Err(Error::Domain(format!("m = {m} exceeds |S|/2 = {}", n / 2)));
    }
    let count = super::hermite::hermite_partition_coeff(n, m)?;
    if count > MAX_PARTITIONS {
        return Err(Error::Size(format!("{count} partitions exceed {MAX_PARTITIONS}")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut pairs = Vec::new();
    let mut singles = Vec::new();
    let remaining: Vec<usize> = ground.to_vec();
    recurse(&remaining, m, &mut pairs, &mut singles, ground, &mut out);
    Ok(out)
}

fn recurse(
    rest: &[usize],
    pairs_left: usize,
    pairs: &mut Vec<(usize, usize)>,
    singles: &mut Vec<usize>,
    ground: &[usize],
    out: &mut Vec<PairPartition>,
) {
    if rest.is_empty() {
        if pairs_left == 0 {
            out.push(PairPartition { pairs: pairs.clone(), singletons: singles.clone(), ground_set: ground.to_vec() });
        }
        return;
    }
    if 2 * pairs_left > rest.len() {
        return;
    }
    let first = rest[0];
    if 2 * pairs_left < rest.len() {
        singles.push(first);
        recurse(&rest[1..], pairs_left, pairs, singles, ground, out);
        singles.pop();
    }
    if pairs_left > 0 {
        for i in 1..rest.len() {
            pairs.push((first, rest[i]));
            let next: Vec<usize> = rest[1..].iter().enumerate().filter(|(j, _)| j + 1 != i).map(|(_, v)| *v).collect();
            recurse(&next, pairs_left - 1, pairs, singles, ground, out);
            pairs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::hermite_partition_coeff;
    use std::collections::HashSet;

    #[test]
    fn small_cases() {
        assert_eq!(pair_partitions(&[1, 2], 1).unwrap().len(), 1);
        assert_eq!(pair_partitions(&[1, 2, 3], 1).unwrap().len(), 3);
        assert!(pair_partitions(&[1, 2, 3], 2).is_err());
        assert_eq!(pair_partitions(&[], 0).unwrap().len(), 1);
    }

    #[test]
    fn counts_match_formula_and_are_distinct() {
        let fact = |k: u128| (1..=k).product::<u128>();
        for n in 0..=8usize {
            let ground: Vec<usize> = (0..n).collect();
            for m in 0..=n / 2 {
                let parts = pair_partitions(&ground, m).unwrap();
                let formula = fact(n as u128) / (2u128.pow(m as u32) * fact(m as u128) * fact((n - 2 * m) as u128));
                assert_eq!(parts.len() as u128, formula);
                assert_eq!(parts.len() as u128, hermite_partition_coeff(n, m).unwrap());
                let canon: HashSet<Vec<(usize, usize)>> = parts
                    .iter()
                    .map(|p| {
                        assert!(p.is_valid());
                        let mut v: Vec<_> = p.pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
                        v.sort();
                        v
                    })
                    .collect();
                assert_eq!(canon.len(), parts.len());
            }
        }
    }
}
