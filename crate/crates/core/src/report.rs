//! Pass/fail reports with residuals. Failing checks are data, not errors.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// How many offending index tuples a check keeps.
pub const MAX_FLAGGED: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// A defining relation of the algebra.
    Hard,
    /// A consequence of the hard relations; failure still fails the report.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub severity: Severity,
    /// 0-based index tuples where the check failed, truncated to `MAX_FLAGGED`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flagged: Vec<Vec<usize>>,
    /// Total number of failing tuples, including those not kept in `flagged`.
    #[serde(default)]
    pub flagged_total: usize,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, severity: Severity) -> Self {
        CheckResult {
            name: name.into(),
            pass: true,
            residual: 0.0,
            severity,
            flagged: Vec::new(),
            flagged_total: 0,
        }
    }

    pub fn single(name: impl Into<String>, severity: Severity, residual: f64, eps: f64) -> Self {
        let mut c = CheckResult::new(name, severity);
        c.record(residual, eps, &[]);
        c
    }

    /// Folds one residual into the check.
    pub fn record(&mut self, residual: f64, eps: f64, index: &[usize]) {
        if residual.is_nan() || residual > self.residual {
            self.residual = residual;
        }
        if residual.is_nan() || residual > eps {
            self.pass = false;
            self.flagged_total += 1;
            if !index.is_empty() && self.flagged.len() < MAX_FLAGGED {
                self.flagged.push(index.to_vec());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Human-readable rendering; flagged indices are printed 1-based.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}]", self.title, if self.passed() { "PASS" } else { "FAIL" });
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:<4} {:<44} residual {:.3e}{}",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.residual,
                if c.severity == Severity::Derived { "  (derived)" } else { "" }
            );
            for idx in &c.flagged {
                let one_based: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                let _ = writeln!(out, "         at ({})", one_based.join(","));
            }
            if c.flagged_total > c.flagged.len() && !c.flagged.is_empty() {
                let _ = writeln!(out, "         ... {} more", c.flagged_total - c.flagged.len());
            }
        }
        out
    }
}
