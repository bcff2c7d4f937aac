//! Meyer scaling function, wavelet and their fractional transforms, tabulated.

pub mod filters;
pub mod fractional;
pub mod profile;
pub mod table;

pub use filters::{Filter, TwoScaleFilters};
pub use fractional::{
    build_fractional_primitive, build_fractional_scaling, build_phi, build_phi_minus_delta, build_psi,
    phi_minus_delta_fourier, spectral_table,
};
pub use table::{FunctionTable, TableParams, TailBound};

use crate::error::Result;
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

/// Identity of a cached table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TableKey {
    Phi,
    Psi,
    FractionalPrimitive(u64),
    FractionalScaling(u64),
    PhiMinusDelta(u64),
    /// Abel kernel for a Hurst vector and an offset vector.
    AbelKernel(Vec<u64>, Vec<i64>),
}

impl TableKey {
    fn file_stem(&self) -> String {
        match self {
            TableKey::Phi => "phi".into(),
            TableKey::Psi => "psi".into(),
            TableKey::FractionalPrimitive(b) => format!("psih_{b:016x}"),
            TableKey::FractionalScaling(b) => format!("phidelta_{b:016x}"),
            TableKey::PhiMinusDelta(b) => format!("phiminus_{b:016x}"),
            TableKey::AbelKernel(h, n) => {
                let hs: Vec<String> = h.iter().map(|b| format!("{b:016x}")).collect();
                let ns: Vec<String> = n.iter().map(|v| v.to_string()).collect();
                format!("abel_{}_{}", hs.join("-"), ns.join("_"))
            }
        }
    }
}

/// Thread-safe memo of tables built with one set of parameters, optionally
/// mirrored to a directory.
#[derive(Debug)]
pub struct TableSet {
    pub params: TableParams,
    cache_dir: Option<PathBuf>,
    tables: Mutex<HashMap<TableKey, Arc<FunctionTable>>>,
}

impl TableSet {
    pub fn new(params: TableParams) -> Self {
        Self { params, cache_dir: None, tables: Mutex::new(HashMap::new()) }
    }

    pub fn with_cache_dir(mut self, dir: Option<PathBuf>) -> Self {
        self.cache_dir = dir;
        self
    }

    pub fn get_or_build<F>(&self, key: TableKey, build: F) -> Result<Arc<FunctionTable>>
    where
        F: FnOnce(&TableParams) -> Result<FunctionTable>,
    {
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let path = self.cache_dir.as_ref().map(|d| {
            d.join(format!(
                "{}_R{}_dx{}.bin",
                key.file_stem(),
                self.params.half_width,
                (1.0 / self.params.dx).round()
            ))
        });
        let table = match path.as_ref().filter(|p| p.exists()).map(|p| FunctionTable::load(p)) {
            Some(Ok(t)) if t.dx == self.params.dx && t.half_width == self.params.half_width => t,
            _ => {
                let t = build(&self.params)?;
                if let Some(p) = &path {
                    if let Some(dir) = p.parent() {
                        let _ = std::fs::create_dir_all(dir);
                    }
                    if let Err(e) = t.save(p) {
                        log::warn!("could not write table cache {}: {e}", p.display());
                    }
                }
                t
            }
        };
        let table = Arc::new(table);
        self.tables.lock().unwrap().entry(key).or_insert_with(|| table.clone());
        Ok(table)
    }

    pub fn phi(&self) -> Result<Arc<FunctionTable>> {
        self.get_or_build(TableKey::Phi, build_phi)
    }

    pub fn psi(&self) -> Result<Arc<FunctionTable>> {
        self.get_or_build(TableKey::Psi, build_psi)
    }

    pub fn fractional_primitive(&self, h: f64) -> Result<Arc<FunctionTable>> {
        self.get_or_build(TableKey::FractionalPrimitive(h.to_bits()), |p| build_fractional_primitive(h, p))
    }

    pub fn fractional_scaling(&self, delta: f64) -> Result<Arc<FunctionTable>> {
        self.get_or_build(TableKey::FractionalScaling(delta.to_bits()), |p| build_fractional_scaling(delta, p))
    }

    pub fn phi_minus_delta(&self, delta: f64) -> Result<Arc<FunctionTable>> {
        let phi = self.phi()?;
        self.get_or_build(TableKey::PhiMinusDelta(delta.to_bits()), |_| {
            build_phi_minus_delta(delta, &phi, usize::MAX)
        })
    }
}
