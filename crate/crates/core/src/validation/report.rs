//! Check and suite reports, rendered as JSON and plain text.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Report-only checks never fail a suite.
    pub asserted: bool,
    pub summary: String,
}

impl Check {
    pub fn asserted(name: &str, passed: bool, summary: String) -> Self {
        Self { name: name.into(), passed, asserted: true, summary }
    }

    pub fn reported(name: &str, summary: String) -> Self {
        Self { name: name.into(), passed: true, asserted: false, summary }
    }

    /// `|value| <= tol` with a standard summary.
    pub fn bound(name: &str, value: f64, tol: f64) -> Self {
        Self::asserted(name, value.is_finite() && value.abs() <= tol, format!("{value:.3e} (bound {tol:.1e})"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub quick: bool,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub details: serde_json::Value,
}

impl SuiteReport {
    pub fn new(suite: &str, quick: bool, seed: u64) -> Self {
        Self { suite: suite.into(), quick, seed, checks: Vec::new(), details: serde_json::Value::Null }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.asserted)
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let flag = if self.quick { " (quick)" } else { "" };
        let _ = writeln!(s, "suite {}{flag}: {}", self.suite, if self.passed() { "PASS" } else { "FAIL" });
        for c in &self.checks {
            let status = match (c.asserted, c.passed) {
                (false, _) => "INFO",
                (true, true) => "PASS",
                (true, false) => "FAIL",
            };
            let _ = writeln!(s, "  [{status}] {}: {}", c.name, c.summary);
        }
        s
    }
}
