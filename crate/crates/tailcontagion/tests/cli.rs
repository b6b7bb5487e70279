//! End-to-end checks of the command-line binary: file round trips against
//! the in-process library, deterministic output, provenance comments, exit
//! codes, and the single-line JSON error record on stderr.

use std::path::Path;
use std::process::{Command, Output};

use tailcontagion::estimators::{empirical_mme, evt_mme, EvtConfig, TailAssumption};
use tailcontagion::models::ModelSpec;
use tailcontagion::sample::BivariateSample;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tailcontagion"))
}

fn run_ok(cmd: &mut Command) -> Output {
    let output = cmd.output().expect("the binary runs");
    assert!(
        output.status.success(),
        "command failed with {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

/// Run a command expected to fail, check its exit code, and parse the
/// single JSON line it must leave on stderr.
fn error_record(cmd: &mut Command, want_code: i32) -> serde_json::Value {
    let output = cmd.output().expect("the binary runs");
    assert_eq!(
        output.status.code(),
        Some(want_code),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stderr = String::from_utf8(output.stderr).expect("stderr is UTF-8");
    let lines: Vec<&str> = stderr.lines().collect();
    assert_eq!(lines.len(), 1, "expected one error line, got: {stderr}");
    serde_json::from_str(lines[0]).expect("stderr line parses as JSON")
}

fn bernoulli_spec() -> ModelSpec {
    ModelSpec::BernoulliMixture { alpha: 2.0, alpha0: 2.5, gamma: 4.0, q: 0.5 }
}

fn simulate_bernoulli(out: &Path, n: usize, seed: u64) {
    run_ok(cli().args([
        "simulate",
        "--model",
        "bernoulli",
        "--alpha",
        "2.0",
        "--alpha0",
        "2.5",
        "--gamma",
        "4.0",
        "--q",
        "0.5",
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        &out.display().to_string(),
    ]));
}

#[test]
fn simulate_then_estimate_matches_the_in_process_result() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sample.csv");
    simulate_bernoulli(&csv, 2000, 42);

    let sample = bernoulli_spec().sample(2000, 42, 0).unwrap();
    assert_eq!(BivariateSample::read_csv_path(&csv).unwrap(), sample);

    let input = csv.display().to_string();
    let output = run_ok(cli().args([
        "estimate", "--input", &input, "--measure", "mme", "--p", "0.01", "--k", "200",
    ]));
    let record: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let config = EvtConfig { k: 200, k0: 200, k1: 200, k2: 200 };
    let expect =
        evt_mme(&sample, 0.01, TailAssumption::AsymptoticIndependence, &config).unwrap().value;
    assert_eq!(record["method"], "evt_ai");
    assert_eq!(record["k"], 200);
    assert_eq!(record["value"].as_f64().unwrap(), expect);

    let output = run_ok(cli().args([
        "estimate",
        "--input",
        &input,
        "--measure",
        "mme",
        "--p",
        "0.05",
        "--empirical",
    ]));
    let record: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(record["method"], "empirical");
    assert_eq!(record["k"], 100);
    assert_eq!(record["value"].as_f64().unwrap(), empirical_mme(&sample, 100).unwrap());
}

#[test]
fn repeating_an_argv_rewrites_a_byte_identical_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sample.csv");
    simulate_bernoulli(&csv, 500, 7);
    let first = std::fs::read(&csv).unwrap();
    simulate_bernoulli(&csv, 500, 7);
    let second = std::fs::read(&csv).unwrap();
    assert_eq!(first, second);
    assert!(!first.is_empty());
}

#[test]
fn sample_files_carry_provenance_comments() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sample.csv");
    simulate_bernoulli(&csv, 50, 3);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let tool = lines.next().unwrap();
    assert!(tool.starts_with("# tailcontagion "), "first line: {tool}");
    let command = lines.next().unwrap();
    assert!(command.starts_with("# command: simulate --model bernoulli"), "line: {command}");
    assert!(command.ends_with(&csv.display().to_string()), "line: {command}");
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "z1,z2");
    let rows = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count();
    assert_eq!(rows, 51, "header plus one row per pair");
}

#[test]
fn an_unknown_subcommand_exits_with_the_usage_code() {
    let output = cli().arg("frobnicate").output().expect("the binary runs");
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
}

#[test]
fn inadmissible_parameters_exit_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sample.csv");
    simulate_bernoulli(&csv, 50, 1);

    let record = error_record(
        cli().args([
            "estimate",
            "--input",
            &csv.display().to_string(),
            "--measure",
            "mme",
            "--p",
            "2.0",
            "--empirical",
        ]),
        3,
    );
    assert_eq!(record["error"]["kind"], "invalid_parameter");
    assert!(record["error"]["message"].as_str().unwrap().contains("0 < p < 1"));

    let record = error_record(
        cli().args(["simulate", "--model", "gauss", "--alpha", "2.0", "--n", "10", "--seed", "1"]),
        3,
    );
    assert_eq!(record["error"]["kind"], "invalid_parameter");
    assert!(record["error"]["message"].as_str().unwrap().contains("--rho"));
}

#[test]
fn malformed_rows_exit_with_code_4() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "z1,z2\n1.0,2.0\n3.0,oops\n").unwrap();
    let record = error_record(
        cli().args([
            "estimate",
            "--input",
            &csv.display().to_string(),
            "--measure",
            "mes",
            "--p",
            "0.01",
        ]),
        4,
    );
    assert_eq!(record["error"]["kind"], "parse_error");
    assert!(record["error"]["message"].as_str().unwrap().contains("line 3"));
}

#[test]
fn a_missing_input_file_exits_with_code_5() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    let record = error_record(
        cli().args([
            "estimate",
            "--input",
            &missing.display().to_string(),
            "--measure",
            "mme",
            "--p",
            "0.01",
        ]),
        5,
    );
    assert_eq!(record["error"]["kind"], "io_error");
}

#[test]
fn the_default_output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        cli()
            .env("TAILCONTAGION_OUT", dir.path())
            .args([
                "simulate", "--model", "mo", "--alpha", "2.0", "--gamma1", "0.8", "--gamma2",
                "0.7", "--n", "20", "--seed", "9",
            ]),
    );
    let sample = BivariateSample::read_csv_path(&dir.path().join("sample.csv")).unwrap();
    assert_eq!(sample.len(), 20);
}
