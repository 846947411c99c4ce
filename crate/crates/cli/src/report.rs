//! Machine-readable run reports.

use dgcat::report::CheckReport;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleError;

pub const TOOL: &str = "dgcat";

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The input was rejected before any check ran.
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Invalid => 2,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ErrorRecord {
    pub kind: String,
    pub field: String,
    pub message: String,
}

impl From<&BundleError> for ErrorRecord {
    fn from(e: &BundleError) -> Self {
        ErrorRecord {
            kind: e.kind().to_string(),
            field: e.field(),
            message: e.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub bundle: Option<String>,
    pub field: String,
    pub seed: u64,
    pub status: Status,
    /// Wall-clock milliseconds; only recorded on request so that reports
    /// stay byte-identical between runs.
    pub timing_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: &str, bundle: Option<&str>, field: &str, seed: u64) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            suite: suite.to_string(),
            bundle: bundle.map(str::to_string),
            field: field.to_string(),
            seed,
            status: Status::Pass,
            timing_ms: None,
            error: None,
            summary: Summary {
                total: 0,
                passed: 0,
                failed: 0,
            },
            checks: Vec::new(),
        }
    }

    pub fn add_checks(&mut self, checks: &CheckReport) {
        for c in &checks.checks {
            self.checks.push(CheckRecord {
                name: c.name.clone(),
                passed: c.passed,
                witness: c.witness.clone().filter(|w| !w.is_empty()),
            });
        }
        self.refresh();
    }

    pub fn reject(&mut self, error: ErrorRecord) {
        self.error = Some(error);
        self.refresh();
    }

    fn refresh(&mut self) {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        self.summary = Summary {
            total: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
        };
        self.status = if self.error.is_some() {
            Status::Invalid
        } else if passed == self.checks.len() {
            Status::Pass
        } else {
            Status::Fail
        };
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self, failures_only: bool) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            out.push_str(&format!("error [{}] {}\n", e.kind, e.message));
        }
        for c in &self.checks {
            if failures_only && c.passed {
                continue;
            }
            let status = if c.passed { "pass" } else { "FAIL" };
            out.push_str(&format!("{status} {}", c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!(": {w}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{}: {} checks, {} passed, {} failed\n",
            self.suite, self.summary.total, self.summary.passed, self.summary.failed
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_checks_and_errors() {
        let mut r = Report::new("s", None, "Q", 0);
        let mut checks = CheckReport::new();
        checks.pass("ok");
        r.add_checks(&checks);
        assert_eq!((r.status, r.status.exit_code()), (Status::Pass, 0));
        checks.fail("bad", "witness");
        r.add_checks(&checks);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.summary.failed, 1);
        r.reject(ErrorRecord {
            kind: "syntax".into(),
            field: String::new(),
            message: "m".into(),
        });
        assert_eq!(r.status.exit_code(), 2);
    }
}
