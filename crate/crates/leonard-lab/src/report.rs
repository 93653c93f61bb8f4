//! Report rendering. The JSON form is the machine-readable source of truth;
//! the text form is a fixed-width table for terminals.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use leonard_core::{BetaProvenance, CheckStatus, VerificationReport};

use crate::subject::FieldJson;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub status: String,
    pub left: String,
    pub right: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportJson {
    pub subject: String,
    pub field: FieldJson,
    pub d: usize,
    pub beta: Option<String>,
    pub beta_provenance: Option<String>,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

pub fn report_to_json(report: &VerificationReport) -> ReportJson {
    let (beta, beta_provenance) = match &report.beta {
        None => (None, None),
        Some(ctx) => (
            Some(ctx.beta().serialize()),
            Some(match ctx.provenance() {
                BetaProvenance::CommonRatio => "common_ratio".to_string(),
                BetaProvenance::Chosen => "chosen".to_string(),
            }),
        ),
    };
    ReportJson {
        subject: report.subject.clone(),
        field: FieldJson::from_spec(report.spec),
        d: report.d,
        beta,
        beta_provenance,
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|row| CheckJson {
                name: row.name.to_string(),
                status: row.status.to_string(),
                left: row.left.clone(),
                right: row.right.clone(),
                detail: row.detail.clone(),
            })
            .collect(),
    }
}

pub fn render_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    writeln!(out, "subject: {}", report.subject).unwrap();
    match &report.beta {
        Some(ctx) => {
            let provenance = match ctx.provenance() {
                BetaProvenance::CommonRatio => "common ratio",
                BetaProvenance::Chosen => "chosen; any scalar is admissible for d <= 2",
            };
            writeln!(out, "beta: {} ({provenance})", ctx.beta()).unwrap();
        }
        None => writeln!(out, "beta: n/a").unwrap(),
    }
    writeln!(
        out,
        "{:<18} {:<8} {:<26} {:<26}",
        "check", "status", "lhs", "rhs"
    )
    .unwrap();
    for row in &report.checks {
        writeln!(
            out,
            "{:<18} {:<8} {:<26} {:<26}",
            row.name,
            row.status.to_string(),
            row.left,
            row.right
        )
        .unwrap();
        if row.status == CheckStatus::Fail && !row.detail.is_empty() {
            writeln!(out, "{:<18} detail: {}", "", row.detail).unwrap();
        }
    }
    writeln!(
        out,
        "result: {}",
        if report.passed() { "pass" } else { "fail" }
    )
    .unwrap();
    out
}
