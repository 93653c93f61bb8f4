//! IO companion to `leonard-core`: the JSON subject and report formats and
//! the verify/search runners behind the `leonard-lab` binary.

pub mod report;
pub mod runner;
pub mod subject;

pub use report::{render_text, report_to_json, CheckJson, ReportFormat, ReportJson};
pub use runner::{load_input, run_search, run_verify, VerifyConfig, VerifyInput, VerifyRun};
pub use subject::{prepare_subject, FieldJson, PreparedSubject, SubjectJson, SubjectVariant};
