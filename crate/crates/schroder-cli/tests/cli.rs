//! End-to-end tests of the installed binary: JSON report shapes, exit
//! codes, error envelopes, and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const MOEBIUS: &str = r#"{"num":[[0,0],[1,0]],"den":[[2,0],[-1,0]]}"#;
const HALF_Z: &str = r#"{"num":[[0,0],[1,0]],"den":[[2,0]]}"#;
const Z_SQUARED: &str = r#"{"num":[[0,0],[0,0],[1,0]],"den":[[1,0]]}"#;
const IDENTITY_MAP: &str = r#"{"num":[[0,0],[1,0]],"den":[[1,0]]}"#;
const RATIONAL_G: &str = r#"{"num":[[1,0]],"den":[[1,0],[-0.4,0]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schroder"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("terminated by exit, not signal")
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(
        exit_code(out),
        0,
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON envelope");
    v["error"]["kind"].as_str().expect("kind is a string").into()
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn close(v: &Value, re: f64, im: f64, eps: f64) -> bool {
    let (a, b) = pair(v);
    (a - re).abs() <= eps && (b - im).abs() <= eps
}

#[test]
fn analyze_classifies_the_moebius_fixture() {
    let report = stdout_json(&run(&["analyze", MOEBIUS]));
    assert_eq!(report["kind"], "schroeder");
    assert!(close(&report["alpha"], 0.0, 0.0, 1e-12));
    assert!(close(&report["multiplier"], 0.5, 0.0, 1e-12));
}

#[test]
fn analyze_reports_the_other_classes_without_failing() {
    let auto = stdout_json(&run(&["analyze", IDENTITY_MAP]));
    assert_eq!(auto["kind"], "automorphism");
    assert_eq!(auto["alpha"], Value::Null);
    let sup = stdout_json(&run(&["analyze", Z_SQUARED]));
    assert_eq!(sup["kind"], "superattracting");
    assert!(close(&sup["multiplier"], 0.0, 0.0, 1e-12));
}

#[test]
fn analyze_rejects_a_pole_inside_the_disc() {
    let out = run(&["analyze", r#"{"num":[[1,0]],"den":[[1,0],[-2,0]]}"#]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(error_kind(&out), "PoleInDisc");
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_json_is_a_parse_error() {
    let out = run(&["analyze", "not json"]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(error_kind(&out), "ParseError");
}

#[test]
fn configuration_bounds_are_usage_errors() {
    for args in [
        vec!["analyze", MOEBIUS, "--order", "4"],
        vec!["analyze", MOEBIUS, "--max-n", "40"],
        vec!["analyze", MOEBIUS, "--tol", "no_such_name=1"],
        vec!["analyze", MOEBIUS, "--tol", "solver_residual"],
    ] {
        let out = run(&args);
        assert_eq!(exit_code(&out), 1, "args: {args:?}");
        assert_eq!(error_kind(&out), "UsageError", "args: {args:?}");
    }
}

#[test]
fn koenigs_table_for_the_fixture_is_all_ones() {
    let report = stdout_json(&run(&["koenigs", MOEBIUS]));
    assert!(close(&report["lambda1"], 0.5, 0.0, 1e-12));
    assert_eq!(report["order"], 64);
    let coeffs = report["coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 65);
    assert!(close(&coeffs[0], 0.0, 0.0, 1e-12));
    for c in &coeffs[1..] {
        assert!(close(c, 1.0, 0.0, 1e-10));
    }
}

#[test]
fn project_extracts_the_functional_components_of_the_identity() {
    let first = stdout_json(&run(&["project", MOEBIUS, "--n", "1", "--f", IDENTITY_MAP]));
    assert!(close(&first["functional_value"], 1.0, 0.0, 1e-10));
    assert!(close(&first["lambda_n"], 0.5, 0.0, 1e-12));
    let coeffs = first["projection"]["coeffs"].as_array().unwrap();
    assert!(close(&coeffs[0], 0.0, 0.0, 1e-10));
    assert!(close(&coeffs[1], 1.0, 0.0, 1e-10));
    assert!(close(&coeffs[2], 1.0, 0.0, 1e-10));

    let second = stdout_json(&run(&["project", MOEBIUS, "--n", "2", "--f", IDENTITY_MAP]));
    assert!(close(&second["functional_value"], -1.0, 0.0, 1e-10));

    let out = run(&["project", MOEBIUS, "--n", "40", "--f", IDENTITY_MAP]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(error_kind(&out), "IndexExceeded");
}

#[test]
fn solve_off_the_spectrum_meets_the_residual_bound() {
    let report = stdout_json(&run(&[
        "solve", MOEBIUS, "--lambda", "1.25,0.25", "--g", RATIONAL_G, "--at", "0.1,0.2",
    ]));
    assert_eq!(report["mode"], "series");
    let residual = report["diagnostics"]["residual"].as_f64().unwrap();
    assert!(residual <= 1e-8, "residual {residual}");
    assert_eq!(report["series"]["coeffs"].as_array().unwrap().len(), 65);
    let samples = report["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 1);
    let (re, im) = pair(&samples[0]["value"]);
    assert!(re.is_finite() && im.is_finite());
}

#[test]
fn solve_on_the_ladder_routes_through_the_eigen_flag() {
    let collision = run(&["solve", MOEBIUS, "--lambda", "0.5,0", "--g", RATIONAL_G]);
    assert_eq!(exit_code(&collision), 2);
    assert_eq!(error_kind(&collision), "EigenvalueCollision");

    // Psi_1(z) = 1, so the identity right side is not solvable at lambda_1.
    let incompatible = run(&["solve", MOEBIUS, "--eigen-n", "1", "--g", IDENTITY_MAP]);
    assert_eq!(exit_code(&incompatible), 2);
    assert_eq!(error_kind(&incompatible), "IncompatibleRHS");

    // Psi_0(z) = 0, so the same right side is solvable at lambda_0 = 1.
    let report = stdout_json(&run(&["solve", MOEBIUS, "--eigen-n", "0", "--g", IDENTITY_MAP]));
    assert_eq!(report["eigen_n"], 0);
    assert!(close(&report["lambda"], 1.0, 0.0, 1e-12));
    assert!(report["diagnostics"]["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn solve_handles_superattracting_symbols() {
    let report = stdout_json(&run(&["solve", Z_SQUARED, "--lambda", "2,0", "--g", RATIONAL_G]));
    assert!(report["diagnostics"]["residual"].as_f64().unwrap() <= 1e-8);

    let eigen = run(&["solve", Z_SQUARED, "--eigen-n", "0", "--g", RATIONAL_G]);
    assert_eq!(exit_code(&eigen), 2);
    assert_eq!(error_kind(&eigen), "WrongClassification");
}

#[test]
fn solve_accepts_a_series_right_side_centered_at_the_fixed_point() {
    let g = r#"{"series":{"center":[0,0],"coeffs":[[0,0],[1,0],[0.5,0]]}}"#;
    let report = stdout_json(&run(&[
        "solve", MOEBIUS, "--lambda", "2,0", "--g", g, "--mode", "pointwise",
    ]));
    assert_eq!(report["mode"], "pointwise");
    assert!(report.get("series").is_none());
    assert!(report["diagnostics"]["residual"].as_f64().unwrap() <= 1e-8);

    let off_center = r#"{"series":{"center":[0.3,0],"coeffs":[[0,0],[1,0]]}}"#;
    let out = run(&["solve", MOEBIUS, "--lambda", "2,0", "--g", off_center]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(error_kind(&out), "CenterMismatch");
}

#[test]
fn an_unmet_residual_bound_is_a_numerical_failure() {
    let out = run(&[
        "solve", MOEBIUS, "--lambda", "1.25,0", "--g", RATIONAL_G,
        "--tol", "solver_residual=1e-300",
    ]);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(error_kind(&out), "ResidualTooLarge");
}

#[test]
fn spectrum_reports_the_multiplier_power_ladder() {
    let report = stdout_json(&run(&["spectrum", MOEBIUS, "--max-n", "3"]));
    assert_eq!(report["classification"]["kind"], "schroeder");
    assert_eq!(report["compact"], false);
    let points = report["spectrum"].as_array().unwrap();
    let expected = [1.0, 0.5, 0.25, 0.125, 0.0];
    assert_eq!(points.len(), expected.len());
    for (point, want) in points.iter().zip(expected) {
        assert!(close(&point["value"], want, 0.0, 1e-14));
    }
    assert_eq!(points[0]["kind"], "eigenvalue");
    assert_eq!(points[4]["kind"], "essential_point");
    assert_eq!(report["contour_checks"].as_array().unwrap().len(), 0);

    let squared = stdout_json(&run(&["spectrum", Z_SQUARED]));
    let points = squared["spectrum"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert!(close(&points[0]["value"], 1.0, 0.0, 1e-14));
    assert!(close(&points[1]["value"], 0.0, 0.0, 1e-14));
}

#[test]
fn spectrum_contour_checks_match_the_projections() {
    let report = stdout_json(&run(&["spectrum", MOEBIUS, "--contour", "1"]));
    let checks = report["contour_checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["n"], 1);
    assert_eq!(checks[0]["nodes"], 256);
    assert!(checks[0]["max_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn verify_all_passes_on_the_fixture() {
    let out = run(&["verify", MOEBIUS]);
    let report = stdout_json(&out);
    assert_eq!(report["all_pass"], true);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    for check in checks {
        assert_eq!(check["pass"], true, "check {check}");
    }
}

#[test]
fn verify_suites_can_run_alone() {
    let report = stdout_json(&run(&["verify", MOEBIUS, "--suite", "koenigs"]));
    assert_eq!(report["suite"], "koenigs");
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["kappa_normalization", "eigen_relation"]);
}

#[test]
fn hardy_diagnostics_match_the_closed_forms() {
    let member = stdout_json(&run(&["hardy", MOEBIUS, "--a=-1", "--p", "1"]));
    assert_eq!(member["member"], true);
    let reference = &member["essential_radius_reference"];
    let radius = reference["essential_radius"].as_f64().unwrap();
    assert!((radius - 0.5f64.powf(1.5)).abs() < 1e-12);
    let outside = reference["eigenvalues_outside"].as_array().unwrap();
    let indices: Vec<u64> = outside.iter().map(|p| p[0].as_u64().unwrap()).collect();
    assert_eq!(indices, [0, 1]);

    let non_member = stdout_json(&run(&["hardy", MOEBIUS, "--a=-0.4", "--p", "2"]));
    assert_eq!(non_member["member"], false);

    let rejected = run(&["hardy", MOEBIUS, "--a", "0.5", "--p", "1"]);
    assert_eq!(exit_code(&rejected), 2);
    assert_eq!(error_kind(&rejected), "InvalidParameter");
}

#[test]
fn compactness_verdicts_separate_the_fixtures() {
    let half = stdout_json(&run(&["compactness", HALF_Z]));
    assert_eq!(half["compact"], true);
    assert!((half["sup_estimate"].as_f64().unwrap() - 0.5).abs() < 1e-9);

    let moebius = stdout_json(&run(&["compactness", MOEBIUS]));
    assert_eq!(moebius["compact"], false);

    let shifted = stdout_json(&run(&[
        "compactness",
        r#"{"num":[[0.2,0],[1,0]],"den":[[4,0]]}"#,
    ]));
    assert_eq!(shifted["compact"], true);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["spectrum", MOEBIUS],
        vec!["solve", MOEBIUS, "--lambda", "1.25,0.25", "--g", RATIONAL_G],
        vec!["hardy", MOEBIUS, "--a=-1", "--p", "1"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(exit_code(&first), 0, "args: {args:?}");
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
    }
}

#[test]
fn pretty_format_renders_the_same_document() {
    let compact = stdout_json(&run(&["spectrum", MOEBIUS]));
    let pretty_out = run(&["spectrum", MOEBIUS, "--format", "pretty"]);
    assert!(String::from_utf8_lossy(&pretty_out.stdout).contains("\n  "));
    assert_eq!(compact, stdout_json(&pretty_out));
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["analyze", MOEBIUS, "--output", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["kind"], "schroeder");
}

#[test]
fn payloads_come_from_stdin_and_files_too() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("symbol.json");
    std::fs::write(&path, MOEBIUS).unwrap();
    let from_file = run(&["analyze", &format!("@{}", path.display())]);
    assert_eq!(stdout_json(&from_file)["kind"], "schroeder");

    let mut child = Command::new(env!("CARGO_BIN_EXE_schroder"))
        .args(["analyze", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(MOEBIUS.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(stdout_json(&out)["kind"], "schroeder");
}
