use ldspec_cli::report::checks_from_csv;
use ldspec_cli::{Report, Status};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn ldspec(args: &[&str]) -> Output {
    ldspec_env(args, &[])
}

fn ldspec_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ldspec"));
    cmd.args(args).env_remove("LDSPEC_TOL_SCALE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn ldspec")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("JSON report")
}

fn write_vector(dir: &Path) -> String {
    let path = dir.join("vector.json");
    let text = r#"{"measure":{"kind":"discrete","lattice":{"count":3,"power":1}},
        "coeffs":[[1,0],[1,0],[1,0]],"truncation":3,"tail":{"kind":"exact"}}"#;
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn periodic_constant_is_not_in_three_quarter_domain() {
    let out = ldspec(&[
        "membership",
        "--operator",
        "periodic",
        "--phi",
        "3.14159265",
        "--s",
        "0.75",
        "--function",
        "const",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema"], "ldspec/1");
    assert_eq!(v["result"]["verdict"]["status"], "NonMember");
    assert_eq!(v["result"]["prediction"], "nonmember");
    assert!(!v["result"]["verdict"]["partial_sums"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn interpolation_suite_passes() {
    let out = ldspec(&["verify", "--suite", "interpolation", "--seed", "42"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["summary"]["passed"].as_u64().unwrap() > 0);
}

#[test]
fn mehler_matches_eigensum() {
    let out = ldspec(&["mehler", "--t", "0.5", "--x", "0.3", "--y", "-0.2"]);
    assert_eq!(code(&out), 0);
    let report = Report::from_json(&stdout(&out)).unwrap();
    let check = report
        .checks
        .iter()
        .find(|c| c.check == "mehler/eigensum")
        .unwrap();
    assert_eq!(check.status, Status::Pass);
    assert!((check.measured.unwrap() - check.expected.unwrap()).abs() <= 1e-8);
}

#[test]
fn kernel_alias_and_hermite_side_agree() {
    let a = json(&ldspec(&[
        "kernel", "--t", "0.5", "--x", "0.3", "--y", "-0.2",
    ]));
    let b = json(&ldspec(&[
        "mehler", "--t", "0.5", "--x", "0.3", "--y", "-0.2", "--side", "hermite",
    ]));
    assert_eq!(a["command"], "mehler");
    assert_eq!(b["summary"]["failed"], 0);
}

#[test]
fn norm_of_lattice_vector() {
    let dir = tempfile::tempdir().unwrap();
    let vector = write_vector(dir.path());
    let out = ldspec(&["norm", "--vector", &vector, "--s", "1"]);
    assert_eq!(code(&out), 0);
    let norm = json(&out)["result"]["norm"].as_f64().unwrap();
    assert!((norm - 6f64.sqrt()).abs() < 1e-14);
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 7] = [
        &["verify", "--suite", "nope"],
        &[
            "membership",
            "--operator",
            "periodic",
            "--phi",
            "7",
            "--s",
            "0.5",
            "--function",
            "const",
        ],
        &[
            "membership",
            "--operator",
            "halfline",
            "--alpha",
            "1",
            "--s",
            "0.5",
            "--function",
            "bump(1,3)",
        ],
        &[
            "membership",
            "--operator",
            "bessel",
            "--gamma",
            "-1",
            "--s",
            "0.5",
            "--function",
            "bump(1,3)",
        ],
        &[
            "membership",
            "--operator",
            "periodic",
            "--phi",
            "0",
            "--s",
            "-1",
            "--function",
            "const",
        ],
        &["hermite-norm", "--s", "0.5", "--function", "nonsense(1)"],
        &["mehler", "--x", "0.3"],
    ];
    for args in cases {
        let out = ldspec(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn invalid_theta_names_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let vector = write_vector(dir.path());
    let out = ldspec(&[
        "interp",
        "--theta",
        "1.5",
        "--measure",
        &vector,
        "--vector",
        &vector,
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta"));
}

#[test]
fn capability_error_exits_three() {
    let out = ldspec(&[
        "membership",
        "--operator",
        "halfline",
        "--alpha",
        "2",
        "--s",
        "0.5",
        "--function",
        "power(0.3)",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&ldspec(&["--help"])), 0);
    assert_eq!(code(&ldspec(&["verify", "--help"])), 0);
}

#[test]
fn verify_is_deterministic() {
    for suite in ["core", "hermite"] {
        let a = ldspec(&["verify", "--suite", suite, "--seed", "7"]);
        let b = ldspec(&["verify", "--suite", suite, "--seed", "7"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{suite}");
    }
}

#[test]
fn json_round_trip_is_byte_identical() {
    let text = stdout(&ldspec(&["verify", "--suite", "sobolev"]));
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
    assert_eq!(report.summary.counts.total, report.checks.len());
}

#[test]
fn csv_round_trip_matches_json_checks() {
    let json_text = stdout(&ldspec(&["verify", "--suite", "core"]));
    let csv_text = stdout(&ldspec(&["verify", "--suite", "core", "--format", "csv"]));
    assert!(csv_text.starts_with("check,status,measured,expected,tol,ref\n"));
    let report = Report::from_json(&json_text).unwrap();
    assert_eq!(checks_from_csv(&csv_text).unwrap(), report.checks);
    assert!(report.checks.iter().all(|c| !c.reference.is_empty()));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["mehler", "--t", "1", "--x", "0", "--y", "0"];
    let printed = stdout(&ldspec(&args));
    let mut with_output = args.to_vec();
    let p = path.display().to_string();
    with_output.extend(["--output", &p]);
    let out = ldspec(&with_output);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn tolerance_scale_multiplies_tolerances() {
    let args = ["mehler", "--t", "0.5", "--x", "0.3", "--y", "-0.2"];
    let base = json(&ldspec(&args));
    let scaled = json(&ldspec_env(&args, &[("LDSPEC_TOL_SCALE", "4")]));
    let tol = |v: &Value| v["checks"][0]["tol"].as_f64().unwrap();
    assert_eq!(tol(&scaled), 4.0 * tol(&base));
    assert_eq!(scaled["inputs"]["tol_scale"], 4.0);
    assert_eq!(code(&ldspec_env(&args, &[("LDSPEC_TOL_SCALE", "abc")])), 2);
    assert_eq!(code(&ldspec_env(&args, &[("LDSPEC_TOL_SCALE", "0")])), 2);
}

#[test]
fn timings_are_opt_in() {
    let plain = json(&ldspec(&["verify", "--suite", "core"]));
    assert!(plain["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c.get("seconds").is_none()));
    let timed = json(&ldspec(&["verify", "--suite", "core", "--timings"]));
    assert!(timed["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["seconds"].is_number()));
}

#[test]
fn form_check_reports_no_violations() {
    let out = ldspec(&["form-check", "--k", "1", "--trials", "20", "--seed", "42"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["violations"], 0);
}

#[test]
fn hermite_norm_agrees_for_gaussian() {
    let out = ldspec(&["hermite-norm", "--s", "1", "--function", "gauss(0,1)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["failed"], 0);
}

#[test]
fn failing_checks_exit_one() {
    let out = ldspec_env(
        &["verify", "--suite", "sobolev"],
        &[("LDSPEC_TOL_SCALE", "1e-300")],
    );
    assert_eq!(code(&out), 1);
    assert!(json(&out)["summary"]["failed"].as_u64().unwrap() > 0);
}
