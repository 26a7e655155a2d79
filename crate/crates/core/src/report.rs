//! Structured pass/fail reports for the verification operations, with a
//! stable JSON rendering.

use serde::Serialize;

/// Names of every report-producing operation in the crate. The command-line
/// `verify-all` runner is required (by test) to cover each of these.
pub const REPORT_OPS: &[&str] = &[
    "verify-dyadic-structure",
    "verify-action-equations",
    "verify-exceptional-tables",
    "doubling-check",
    "gamma-p-boundary-test",
    "gamma-s-structure",
    "gamma-s-doubling-witness",
];

/// One verified condition.
#[derive(Clone, Debug, Serialize)]
pub struct ReportItem {
    pub label: String,
    pub passed: bool,
    /// Witness or context; empty when there is nothing to add.
    pub detail: String,
}

/// Outcome of a verification operation: a list of conditions, each with a
/// pass flag and optional witness detail.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub op: String,
    pub passed: bool,
    pub items: Vec<ReportItem>,
}

impl Report {
    pub fn new(op: &str) -> Self {
        debug_assert!(REPORT_OPS.contains(&op), "unregistered report op {op}");
        Report {
            op: op.to_string(),
            passed: true,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.items.push(ReportItem {
            label: label.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.push(label, true, detail);
    }

    pub fn fail(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.push(label, false, detail);
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| !i.passed)
    }

    /// Deterministic pretty JSON; identical inputs give identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_fail_aggregation() {
        let mut r = Report::new("doubling-check");
        r.pass("a", "");
        assert!(r.passed);
        r.fail("b", "witness");
        assert!(!r.passed);
        r.pass("c", "");
        assert!(!r.passed);
        assert_eq!(r.failures().count(), 1);
        let json = r.to_json();
        assert!(json.contains("\"doubling-check\""));
        assert_eq!(json, r.to_json());
    }
}
