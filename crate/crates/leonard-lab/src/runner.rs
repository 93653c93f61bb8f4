//! Orchestration for the two subcommands: load subjects, verify, render,
//! and decide the exit status. Input problems are errors (exit 2 at the
//! binary level); check failures are reported output with a false
//! `all_passed` (exit 1).

use std::path::Path;

use anyhow::{bail, Context, Result};

use leonard_core::{
    search_parameter_arrays, verify_all, FieldSpec, VerificationReport, VerifyOptions, CHECK_NAMES,
};

use crate::report::{render_text, report_to_json, ReportFormat};
use crate::subject::{prepare_subject, subject_for_array, SubjectJson};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub format: ReportFormat,
    /// Restrict the report to these check names.
    pub checks: Option<Vec<String>>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct VerifyInput {
    pub subjects: Vec<SubjectJson>,
    /// True when the input file held an array; the report mirrors the shape.
    pub batch: bool,
}

impl VerifyInput {
    pub fn single(subject: SubjectJson) -> Self {
        VerifyInput {
            subjects: vec![subject],
            batch: false,
        }
    }
}

pub struct VerifyRun {
    pub output: String,
    pub all_passed: bool,
}

/// Reads a subject file holding either one subject object or an array.
pub fn load_input(path: &Path) -> Result<VerifyInput> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", path.display()))?;
    if value.is_array() {
        let subjects: Vec<SubjectJson> =
            serde_json::from_value(value).context("subject array does not match the schema")?;
        if subjects.is_empty() {
            bail!("subject array is empty");
        }
        Ok(VerifyInput {
            subjects,
            batch: true,
        })
    } else {
        let subject: SubjectJson =
            serde_json::from_value(value).context("subject does not match the schema")?;
        Ok(VerifyInput::single(subject))
    }
}

fn validated_filter(cfg: &VerifyConfig) -> Result<Option<Vec<String>>> {
    match &cfg.checks {
        None => Ok(None),
        Some(names) => {
            for name in names {
                if !CHECK_NAMES.contains(&name.as_str()) {
                    bail!(
                        "unknown check name {name:?}; known names: {}",
                        CHECK_NAMES.join(", ")
                    );
                }
            }
            Ok(Some(names.clone()))
        }
    }
}

fn apply_filter(report: &mut VerificationReport, filter: &Option<Vec<String>>) {
    if let Some(names) = filter {
        report
            .checks
            .retain(|row| names.iter().any(|n| n == row.name));
    }
}

/// Verifies every subject; the rendered output follows the input shape
/// (object in, object out) and `all_passed` reflects the retained rows.
pub fn run_verify(input: &VerifyInput, cfg: &VerifyConfig) -> Result<VerifyRun> {
    let filter = validated_filter(cfg)?;
    let options = VerifyOptions {
        seed: cfg.seed,
        ..VerifyOptions::default()
    };
    let mut reports = Vec::with_capacity(input.subjects.len());
    for (index, subject) in input.subjects.iter().enumerate() {
        let prepared = prepare_subject(subject)
            .with_context(|| format!("subject #{index}"))?;
        let mut report = verify_all(&prepared.pair, &options);
        report.subject = prepared.description;
        apply_filter(&mut report, &filter);
        reports.push(report);
    }
    let all_passed = reports.iter().all(VerificationReport::passed);
    let output = match cfg.format {
        ReportFormat::Json => {
            if input.batch {
                let json: Vec<_> = reports.iter().map(report_to_json).collect();
                serde_json::to_string_pretty(&json)?
            } else {
                serde_json::to_string_pretty(&report_to_json(&reports[0]))?
            }
        }
        ReportFormat::Text => {
            let mut out = String::new();
            for (i, report) in reports.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&render_text(report));
            }
            out
        }
    };
    Ok(VerifyRun { output, all_passed })
}

/// Enumerates parameter arrays and renders them as a JSON array of subject
/// objects, each directly consumable by `run_verify`.
pub fn run_search(field: FieldSpec, d: usize, limit: usize) -> Result<String> {
    let arrays = search_parameter_arrays(field, d, limit)?;
    let subjects: Vec<SubjectJson> = arrays.iter().map(subject_for_array).collect();
    Ok(serde_json::to_string_pretty(&subjects)?)
}
