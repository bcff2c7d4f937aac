//! Shared fixtures for the criterion benchmarks.

use hermsim::meyer::{TableParams, TableSet};
use hermsim::HurstVector;

/// Table set with every table the path benchmarks touch already built.
pub fn warm_tables(hs: &[&[f64]]) -> TableSet {
    let t = TableSet::new(TableParams::default());
    for h in hs {
        for &hl in *h {
            t.fractional_primitive(hl).expect("psi_h table");
            t.fractional_scaling(hl - 0.5).expect("Phi_Delta table");
        }
    }
    t
}

pub fn hurst(h: &[f64]) -> HurstVector {
    HurstVector::new(h.to_vec()).expect("admissible Hurst vector")
}
