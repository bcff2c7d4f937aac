//! Subcommand implementations. Each returns `Ok(false)` when a check fails.

use crate::config::{config_error, Rep, Route, RunConfig};
use anyhow::{Context, Result};
use hermsim::chaos::{sigma_window, SigmaRoute};
use hermsim::field::GaussianField;
use hermsim::meyer::TableSet;
use hermsim::process::{
    approx_path, approx_path_direct, fbm_path, fullseries_path, horizon_order, ApproxParams, FullSeriesParams,
    SamplePath,
};
use hermsim::validation::{run_suite, SuiteName, SuiteOptions, SuiteReport};
use serde_json::json;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "HERMSIM_TABLE_CACHE";
const ORTHONORMALITY_TOL: f64 = 1e-6;

fn table_set(cfg: &RunConfig) -> TableSet {
    let cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    TableSet::new(cfg.table_params()).with_cache_dir(cache)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn tables(cfg: &RunConfig) -> Result<bool> {
    let h = cfg.hurst()?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("tables"));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let set = table_set(cfg);
    let phi = set.phi()?;
    let psi = set.psi()?;
    let mut files = vec![("phi.bin".to_string(), phi.clone()), ("psi.bin".to_string(), psi.clone())];
    for &hl in h.values() {
        files.push((format!("psi_h_{hl}.bin"), set.fractional_primitive(hl)?));
        files.push((format!("phi_delta_{:.4}.bin", hl - 0.5), set.fractional_scaling(hl - 0.5)?));
    }
    let mut worst = 0.0f64;
    for k in -5i64..=5 {
        let delta = if k == 0 { 1.0 } else { 0.0 };
        worst = worst.max((phi.shifted_inner_product(&phi, k)? - delta).abs());
        worst = worst.max(phi.shifted_inner_product(&psi, k)?.abs());
        worst = worst.max((psi.shifted_inner_product(&psi, k)? - delta).abs());
    }
    let mut ok = worst < ORTHONORMALITY_TOL;
    let mut entries = Vec::new();
    for (name, t) in &files {
        t.save(&dir.join(name))?;
        let tail = t.certify(8.0, cfg.table_params().tail_tolerance);
        if name.starts_with("psi_h") || name.starts_with("phi_delta") {
            ok &= tail.certified;
        }
        entries.push(json!({
            "file": name,
            "label": t.label,
            "interpolation_error": t.interpolation_error,
            "tail": tail,
        }));
    }
    let report = json!({
        "config": cfg,
        "orthonormality_residual": worst,
        "tables": entries,
        "passed": ok,
    });
    write_json(&dir.join("tables.json"), &report)?;
    println!("orthonormality residual (|k| <= 5): {worst:.3e}");
    for e in &entries {
        println!("{}: tail certified = {}", e["file"].as_str().unwrap_or(""), e["tail"]["certified"]);
    }
    println!("{} table files written to {}", files.len(), dir.display());
    Ok(ok)
}

pub fn generate(cfg: &RunConfig) -> Result<bool> {
    let h = cfg.hurst()?;
    let seed = cfg.seed_or_default();
    let set = table_set(cfg);
    let mut ap = ApproxParams::new(cfg.level, cfg.t_max, cfg.grid_n);
    ap.band = cfg.band;
    ap.q_range = cfg.q_range;
    ap.farima_order = cfg.farima_order.unwrap_or_else(|| horizon_order(cfg.horizon, cfg.level));
    let base = cfg.base_level.unwrap_or(cfg.level);
    let path: SamplePath = match cfg.representation {
        Rep::Approx => approx_path(&h, &ap, &GaussianField::new(seed, base).replica(cfg.replica), &set)?,
        Rep::Direct => {
            approx_path_direct(&h, &ap, cfg.quad_nodes, &GaussianField::new(seed, base).replica(cfg.replica), &set)?
        }
        Rep::Fbm => {
            if h.d() != 1 {
                return Err(config_error(format!("fbm needs d = 1, got d = {}", h.d())));
            }
            fbm_path(h.values()[0], &ap, &GaussianField::new(seed, base).replica(cfg.replica), &set)?
        }
        Rep::Fullseries => {
            let mut fp = FullSeriesParams::new(cfg.level, cfg.t_max, cfg.grid_n);
            fp.b = cfg.b;
            fp.b_prime = cfg.b_prime;
            fp.g = cfg.g;
            fp.gl_order = cfg.gl_order;
            fullseries_path(&h, &fp, &GaussianField::new(seed, 0).replica(cfg.replica), &set)?
        }
    };
    for w in &path.meta.warnings {
        log::warn!("{w}");
    }
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("path.csv"));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(&out).with_context(|| format!("creating {}", out.display()))?);
    path.write_csv(&mut w)?;
    w.flush()?;
    let meta = json!({ "config": cfg, "meta": path.meta });
    write_json(&out.with_extension("meta.json"), &meta)?;
    println!("{} points written to {} (sup |X| = {:.6e})", path.values.len(), out.display(), path.sup_norm());
    Ok(true)
}

fn suite_list(name: &str) -> Result<Vec<SuiteName>> {
    if name == "all" {
        return Ok(SuiteName::ALL.to_vec());
    }
    Ok(vec![name.parse::<SuiteName>().map_err(|e| config_error(e.to_string()))?])
}

pub fn validate(cfg: &RunConfig) -> Result<bool> {
    let names = suite_list(&cfg.suite)?;
    let opts = SuiteOptions { quick: cfg.quick, seed: cfg.seed, h: cfg.hurst_values()?, replicas: cfg.replicas };
    if let Some(h) = &opts.h {
        hermsim::HurstVector::new(h.clone())?;
    }
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("reports"));
    let set = table_set(cfg);
    let mut all_ok = true;
    let mut summary: Vec<SuiteReport> = Vec::new();
    for name in names {
        log::info!("running suite {name}");
        let report = run_suite(name, &opts, &set)?;
        print!("{}", report.to_text());
        all_ok &= report.passed();
        write_json(&dir.join(format!("{name}.json")), &json!({ "config": cfg, "report": report }))?;
        summary.push(report);
    }
    if summary.len() > 1 {
        let text: String = summary.iter().map(|r| r.to_text()).collect();
        fs::write(dir.join("all.txt"), format!("config: {}\n{text}", serde_json::to_string(cfg)?))?;
    }
    Ok(all_ok)
}

pub fn sigma(cfg: &RunConfig) -> Result<bool> {
    let h = cfg.hurst()?;
    let seed = cfg.seed_or_default();
    let order = cfg.farima_order.unwrap_or(256);
    let base = cfg.base_level.unwrap_or(cfg.level);
    let field = GaussianField::new(seed, base).replica(cfg.replica);
    let route = match cfg.route {
        Route::Truncated => SigmaRoute::Truncated,
        Route::Farima => SigmaRoute::Farima,
    };
    let coeffs = sigma_window(cfg.level, &h, cfg.k_lo, cfg.k_hi, &field, order, route)?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("sigma.csv"));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(&out).with_context(|| format!("creating {}", out.display()))?);
    coeffs.write_csv(&mut w)?;
    w.flush()?;
    write_json(&out.with_extension("meta.json"), &json!({ "config": cfg, "farima_order": order }))?;
    println!("{} coefficients written to {}", coeffs.values.len(), out.display());
    Ok(true)
}
