//! Structured verification reports with deterministic rendering: identical
//! configuration and seed produce byte-identical output.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::config::{ReportFormat, SuiteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

/// One verified identity (or informational measurement). The `anchor`
/// names the identity being exercised so a report line can be traced back
/// to the claim it checks.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub case: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn pass(suite: &str, case: &str, anchor: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            case: case.to_string(),
            status: if residual <= tolerance { CheckStatus::Pass } else { CheckStatus::Fail },
            residual: Some(residual),
            tolerance: Some(tolerance),
            anchor: anchor.to_string(),
            detail: None,
        }
    }

    pub fn boolean(suite: &str, case: &str, anchor: &str, ok: bool) -> Self {
        Self {
            suite: suite.to_string(),
            case: case.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            residual: None,
            tolerance: None,
            anchor: anchor.to_string(),
            detail: None,
        }
    }

    pub fn info(suite: &str, case: &str, anchor: &str, detail: String) -> Self {
        Self {
            suite: suite.to_string(),
            case: case.to_string(),
            status: CheckStatus::Info,
            residual: None,
            tolerance: None,
            anchor: anchor.to_string(),
            detail: Some(detail),
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub dim: usize,
    pub order: usize,
    pub seed: u64,
    pub suites: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub info: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: &SuiteConfig, mut checks: Vec<CheckResult>) -> Self {
        // deterministic ordering by case identity, independent of
        // execution interleaving
        checks.sort_by(|a, b| (&a.suite, &a.case).cmp(&(&b.suite, &b.case)));
        let summary = Summary {
            passed: checks.iter().filter(|c| c.status == CheckStatus::Pass).count(),
            failed: checks.iter().filter(|c| c.status == CheckStatus::Fail).count(),
            info: checks.iter().filter(|c| c.status == CheckStatus::Info).count(),
        };
        Report {
            config: ConfigEcho {
                dim: config.truncation,
                order: config.max_order,
                seed: config.seed,
                suites: config.suites.iter().map(|s| s.name().to_string()).collect(),
                tolerances: config.tolerances.iter().map(|(k, v)| (k.to_string(), v)).collect(),
            },
            checks,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut out = serde_json::to_string_pretty(self).expect("serializable");
                out.push('\n');
                out
            }
            ReportFormat::Markdown => self.render_markdown(),
        }
    }

    fn render_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("# Verification report\n\n");
        out.push_str(&format!(
            "- dim: {}\n- order: {}\n- seed: {}\n- suites: {}\n\n",
            self.config.dim,
            self.config.order,
            self.config.seed,
            self.config.suites.join(", ")
        ));
        out.push_str("| suite | case | status | residual | tolerance | identity |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Info => "info",
            };
            let residual = c.residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
            let tolerance = c.tolerance.map_or("-".to_string(), |t| format!("{t:.1e}"));
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                c.suite, c.case, status, residual, tolerance, c.anchor
            ));
        }
        out.push_str(&format!(
            "\n{} passed, {} failed, {} informational\n",
            self.summary.passed, self.summary.failed, self.summary.info
        ));
        out
    }
}
