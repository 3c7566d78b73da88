//! Check records and report emission.
//!
//! A failing check always carries a concrete witness (the inputs and both
//! evaluated sides). Records are sorted by (suite, check) id, so the
//! emitted documents are byte-identical for identical scenario and seed
//! regardless of execution order. Wall times are collected for the console
//! summary only and never emitted, keeping the documents deterministic.

use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check has no content in this scenario (e.g. curvature identities
    /// on a 1-dimensional base, where every 2-form vanishes).
    Vacuous,
}

#[derive(Clone, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    /// Prose statement of the identity being verified.
    pub law: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl CheckRecord {
    pub fn id(&self) -> String {
        format!("{}/{}", self.suite, self.check)
    }
}

#[derive(Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub suites: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    pub vacuous: usize,
}

impl Report {
    pub fn new(scenario: String, seed: u64, suites: Vec<String>, mut checks: Vec<CheckRecord>) -> Report {
        checks.sort_by_key(|c| (c.suite.clone(), c.check.clone()));
        let passed = checks
            .iter()
            .filter(|c| c.status == CheckStatus::Pass)
            .count();
        let failed = checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count();
        let vacuous = checks
            .iter()
            .filter(|c| c.status == CheckStatus::Vacuous)
            .count();
        Report {
            scenario,
            seed,
            suites,
            checks,
            passed,
            failed,
            vacuous,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn emit_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn emit_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Verification report: {}", self.scenario);
        let _ = writeln!(out);
        let _ = writeln!(out, "- seed: {}", self.seed);
        let _ = writeln!(out, "- suites: {}", self.suites.join(", "));
        let _ = writeln!(
            out,
            "- checks: {} passed, {} failed, {} vacuous",
            self.passed, self.failed, self.vacuous
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "| check | law | status |");
        let _ = writeln!(out, "|---|---|---|");
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Vacuous => "vacuous",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                c.id(),
                c.law.replace('|', "\\|"),
                status
            );
        }
        let failures: Vec<&CheckRecord> = self
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .collect();
        if !failures.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "## Failures");
            for c in failures {
                let _ = writeln!(out);
                let _ = writeln!(out, "### {}", c.id());
                let _ = writeln!(out);
                let _ = writeln!(out, "```");
                let _ = writeln!(
                    out,
                    "{}",
                    c.witness.as_deref().unwrap_or("(no witness recorded)")
                );
                let _ = writeln!(out, "```");
            }
        }
        out
    }

    /// Console summary with wall times (stderr only; not part of the
    /// deterministic documents).
    pub fn console_summary(&self) -> String {
        let mut out = String::new();
        let mut by_suite: Vec<(String, usize, usize, usize, u128)> = Vec::new();
        for c in &self.checks {
            match by_suite.iter_mut().find(|(s, ..)| s == &c.suite) {
                Some(entry) => {
                    match c.status {
                        CheckStatus::Pass => entry.1 += 1,
                        CheckStatus::Fail => entry.2 += 1,
                        CheckStatus::Vacuous => entry.3 += 1,
                    }
                    entry.4 += c.wall_ms;
                }
                None => by_suite.push((
                    c.suite.clone(),
                    (c.status == CheckStatus::Pass) as usize,
                    (c.status == CheckStatus::Fail) as usize,
                    (c.status == CheckStatus::Vacuous) as usize,
                    c.wall_ms,
                )),
            }
        }
        for (suite, pass, fail, vac, ms) in by_suite {
            let _ = writeln!(
                out,
                "suite {:<14} {:>3} pass {:>2} fail {:>2} vacuous  ({} ms)",
                suite, pass, fail, vac, ms
            );
        }
        let _ = writeln!(
            out,
            "total: {} passed, {} failed, {} vacuous",
            self.passed, self.failed, self.vacuous
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(suite: &str, check: &str, status: CheckStatus) -> CheckRecord {
        CheckRecord {
            suite: suite.into(),
            check: check.into(),
            law: "test law".into(),
            status,
            witness: match status {
                CheckStatus::Fail => Some("witness".into()),
                _ => None,
            },
            wall_ms: 1,
        }
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("s".into(), 0, vec![], vec![]);
        assert!(r.all_passed());
        assert!(r.emit_json().contains("\"checks\": []"));
        assert!(r.emit_markdown().contains("0 passed"));
    }

    #[test]
    fn failing_check_carries_witness() {
        let r = Report::new(
            "s".into(),
            0,
            vec!["a".into()],
            vec![record("a", "c1", CheckStatus::Fail)],
        );
        assert!(!r.all_passed());
        assert!(r.emit_json().contains("witness"));
        assert!(r.emit_markdown().contains("## Failures"));
    }

    #[test]
    fn markdown_row_count_matches_checks() {
        let r = Report::new(
            "s".into(),
            0,
            vec!["a".into()],
            vec![
                record("a", "c1", CheckStatus::Pass),
                record("a", "c2", CheckStatus::Vacuous),
                record("b", "c3", CheckStatus::Pass),
            ],
        );
        let md = r.emit_markdown();
        let rows = md
            .lines()
            .filter(|l| l.starts_with("| ") && !l.starts_with("| check"))
            .count();
        assert_eq!(rows, 3);
    }

    #[test]
    fn records_are_sorted_for_determinism() {
        let r = Report::new(
            "s".into(),
            0,
            vec![],
            vec![
                record("b", "z", CheckStatus::Pass),
                record("a", "y", CheckStatus::Pass),
                record("a", "x", CheckStatus::Pass),
            ],
        );
        let ids: Vec<String> = r.checks.iter().map(|c| c.id()).collect();
        assert_eq!(ids, vec!["a/x", "a/y", "b/z"]);
    }
}
