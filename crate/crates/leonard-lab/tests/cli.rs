//! End-to-end tests of the binary: flags, exit codes, report formats, and
//! the search/verify round trip.

use std::path::Path;
use std::process::{Command, Output};

use leonard_lab::{ReportJson, SubjectJson};

fn leonard_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leonard-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn leonard_lab_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leonard-lab"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn verify_family_text_report() {
    let output = leonard_lab(&["verify", "--family", "krawtchouk", "--d", "3", "--field", "Q"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("det1"));
    assert!(text.contains("144"));
    assert!(text.contains("result: pass"));
}

#[test]
fn verify_family_json_report() {
    let output = leonard_lab(&[
        "verify", "--family", "krawtchouk", "--d", "4", "--field", "Q", "--report", "json",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: ReportJson = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(report.passed);
    assert_eq!(report.d, 4);
    assert_eq!(report.beta.as_deref(), Some("2"));
    let rank = report.checks.iter().find(|c| c.name == "rank").unwrap();
    assert_eq!(rank.left, "1");
}

#[test]
fn field_too_small_is_a_validation_error() {
    let output = leonard_lab(&["verify", "--family", "krawtchouk", "--d", "3", "--field", "p=3"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("FieldTooSmall"), "{}", stderr(&output));
}

#[test]
fn bad_field_flag_and_missing_input_exit_2() {
    let output = leonard_lab(&["verify", "--family", "krawtchouk", "--d", "3", "--field", "R"]);
    assert_eq!(output.status.code(), Some(2));

    let output = leonard_lab(&["verify", "--input", "/nonexistent/pair.json"]);
    assert_eq!(output.status.code(), Some(2));

    let output = leonard_lab(&["verify"]);
    assert_eq!(output.status.code(), Some(2));

    let output = leonard_lab(&["search", "--d", "3", "--field", "Q"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn checks_filter() {
    let output = leonard_lab(&[
        "verify", "--family", "krawtchouk", "--d", "3", "--field", "Q", "--report", "json",
        "--checks", "det1,det2",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report: ReportJson = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report.checks.len(), 2);

    let output = leonard_lab(&[
        "verify", "--family", "krawtchouk", "--d", "3", "--field", "Q", "--checks", "bogus",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("unknown check name"));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let args = [
        "verify", "--family", "krawtchouk", "--d", "5", "--field", "Q", "--report", "json",
    ];
    let first = leonard_lab(&args);
    let second = leonard_lab(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn search_writes_arrays_that_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let output = leonard_lab_in(
        dir.path(),
        &["search", "--d", "1", "--field", "p=5", "--limit", "3", "--out", "arrays.json"],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = std::fs::read_to_string(dir.path().join("arrays.json")).unwrap();
    let subjects: Vec<SubjectJson> = serde_json::from_str(&text).unwrap();
    assert_eq!(subjects.len(), 3);

    let output = leonard_lab_in(
        dir.path(),
        &["verify", "--input", "arrays.json", "--report", "json"],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let reports: Vec<ReportJson> = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r.passed));
}

#[test]
fn search_limit_zero_is_an_empty_array() {
    let output = leonard_lab(&["search", "--d", "1", "--field", "p=5", "--limit", "0"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).trim(), "[]");
}

#[test]
fn seed_env_is_parsed() {
    let ok = Command::new(env!("CARGO_BIN_EXE_leonard-lab"))
        .env("LEONARD_LAB_SEED", "7")
        .args(["verify", "--family", "krawtchouk", "--d", "3", "--field", "Q"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    let bad = Command::new(env!("CARGO_BIN_EXE_leonard-lab"))
        .env("LEONARD_LAB_SEED", "not-a-number")
        .args(["verify", "--family", "krawtchouk", "--d", "3", "--field", "Q"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("LEONARD_LAB_SEED"));
}

#[test]
fn verify_raw_matrices_with_recovered_spectrum() {
    // A valid pair fed as raw matrices: the eigenvalues of the tridiagonal
    // side are recovered exactly, so full verification still passes.
    let dir = tempfile::tempdir().unwrap();
    let subject = serde_json::json!({
        "field": "Q",
        "subject": {"matrices": {
            "basis_tag": "dual_eigenbasis",
            "A": [["0", "2", "0"], ["1", "0", "1"], ["0", "2", "0"]],
            "A_star": [["2", "0", "0"], ["0", "0", "0"], ["0", "0", "-2"]]
        }}
    });
    let path = dir.path().join("pair.json");
    std::fs::write(&path, serde_json::to_string(&subject).unwrap()).unwrap();
    let output = leonard_lab_in(dir.path(), &["verify", "--input", "pair.json", "--report", "json"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: ReportJson = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(report.passed);
}

#[test]
fn verify_out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let output = leonard_lab_in(
        dir.path(),
        &[
            "verify", "--family", "krawtchouk", "--d", "2", "--field", "p=13",
            "--report", "json", "--out", "report.json",
        ],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: ReportJson =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert!(report.passed);
    assert_eq!(report.subject, "family krawtchouk d=2 over F_13");
}
