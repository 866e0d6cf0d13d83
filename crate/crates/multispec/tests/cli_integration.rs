//! End-to-end tests of the `multispec` binary: exit codes, JSON schema,
//! determinism, and the file-driven subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_multispec")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary must spawn")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report: {e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn dims_exits_zero_with_expected_payload() {
    let out = run(&["dims", "--d", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["results"]["N_dn"], 3);
    assert_eq!(v["results"]["moduli_dim"], 6);
    assert_eq!(v["results"]["coeff_count"], 12);
    assert_eq!(v["results"]["admissible"][0], serde_json::json!([1, 0]));
}

#[test]
fn dims_projective_flag() {
    let out = run(&["dims", "--d", "2", "--n", "2", "--projective"]);
    let v = report(&out);
    assert_eq!(v["results"]["moduli_dim"], 9);
    assert_eq!(v["results"]["admissible"][0], serde_json::json!([1, 1, 0]));
}

#[test]
fn unknown_flag_exits_two() {
    let out = run(&["dims", "--d", "2", "--n", "2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_subcommand_exits_two() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_rejects_zero_dimension() {
    let out = run(&["lattice", "--d", "2", "--p", "4", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_counts() {
    let out = run(&["lattice", "--d", "2", "--p", "4", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["fix_count"], 15);
    assert_eq!(v["results"]["per_count"], 12);
    assert_eq!(v["results"]["partition_sum"], 16);
}

#[test]
fn gates_full_grid_passes() {
    let out = run(&["gates", "--grid", "d=2..5,n=1..4,p=4..8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["anchor_2_2_4"]["affine"]["lhs"], 24);
    assert_eq!(v["results"]["anchor_2_2_4"]["affine"]["rhs"], 28);
    // the n = 1 corner is reported, not silently dropped
    let outside = v["results"]["outside_hypothesis"].as_array().unwrap();
    assert!(outside
        .iter()
        .any(|e| e["d"] == 2 && e["n"] == 1 && e["p"] == 4 && e["holds"] == false));
}

#[test]
fn deriv_value_and_oracle() {
    let out = run(&[
        "deriv",
        "--d",
        "2",
        "--n",
        "2",
        "--p",
        "2",
        "--k",
        "1",
        "--m",
        "1",
        "--index",
        "1,0",
        "--point",
        "1/3,0/1",
        "--fd-check",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert!((v["results"]["value"][0].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert!(v["results"]["fd_delta"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["results"]["q_degrees"], serde_json::json!([1, 0]));
}

#[test]
fn deriv_rejects_wrong_period() {
    let out = run(&[
        "deriv", "--d", "2", "--n", "2", "--p", "3", "--k", "1", "--m", "1", "--index", "1,0",
        "--point", "1/3,0/1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_selection_via_cli() {
    let out = run(&[
        "witness",
        "--d",
        "2",
        "--n",
        "2",
        "--periods",
        "4,4,4,4,4,4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["valid"], true);
    assert_eq!(v["results"]["points"].as_array().unwrap().len(), 2);
    assert_eq!(v["checks"][1]["name"], "independent_reverification");
    assert_eq!(v["checks"][1]["pass"], true);
}

#[test]
fn witness_wrong_period_count_is_usage_error() {
    let out = run(&["witness", "--d", "2", "--n", "2", "--periods", "4,4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn projective_witness_via_cli() {
    let out = run(&[
        "witness",
        "--d",
        "2",
        "--n",
        "2",
        "--periods",
        "5,5,5,5,5,5,5,5,5",
        "--projective",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["valid"], true);
    // indices (1,1,0), (1,0,1), (0,1,1): first nonzero affine positions
    assert_eq!(v["results"]["k_choices"], serde_json::json!([1, 2, 1]));
}

#[test]
fn verify_rank_via_cli() {
    let out = run(&[
        "verify-rank",
        "--d",
        "2",
        "--n",
        "2",
        "--c",
        "0.013,0.021,-0.017,0.009",
        "--periods",
        "4,4,4,4,4,4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["certified_full_rank"], true);
    assert_eq!(v["results"]["rank_at_tol"], 6);
    assert_eq!(v["results"]["singular_values"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_rank_rejects_power_map() {
    let out = run(&[
        "verify-rank",
        "--d",
        "2",
        "--n",
        "2",
        "--c",
        "0,0,0,0",
        "--periods",
        "4,4,4,4,4,4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    assert_eq!(v["checks"][0]["pass"], false);
}

#[test]
fn monodromy_loop_file() {
    let path = data("loop_quarter.json");
    let out = run(&["monodromy", "--loop", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = report(&out);
    assert_eq!(v["results"]["mapping"]["fp0#0"], "fp1#0");
    assert_eq!(v["results"]["mapping"]["cyc#0"], "cyc#0");
    assert_eq!(v["results"]["commutes_with_dynamics"], true);
}

#[test]
fn track_matches_family_flag() {
    let path = data("loop_quarter.json");
    let ok = run(&[
        "track",
        "--family",
        "unicritical_1d",
        "--loop",
        path.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let mismatch = run(&[
        "track",
        "--family",
        "custom",
        "--loop",
        path.to_str().unwrap(),
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn certify_hyperbolic_modes() {
    let path = data("chain_single.json");
    let chain = run(&["certify-hyperbolic", "--spec", path.to_str().unwrap()]);
    assert_eq!(chain.status.code(), Some(0));
    let v = report(&chain);
    assert_eq!(v["results"]["certified"], true);
    assert_eq!(v["results"]["bound_A"], 40.0);
    // the literal inclusion is sharper and fails at |b| = 100
    let strict = run(&[
        "certify-hyperbolic",
        "--spec",
        path.to_str().unwrap(),
        "--strict-inclusion",
    ]);
    assert_eq!(strict.status.code(), Some(1));
    let v = report(&strict);
    assert_eq!(v["results"]["certified"], false);
    assert_eq!(v["results"]["chain_ok"], true);
}

#[test]
fn spectrum_via_cli() {
    let out = run(&["spectrum", "--d", "2", "--n", "1", "--c", "0,0", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["cycle_count"], 1);
    let e1 = &v["results"]["spectra"][0][0];
    assert!((e1[0].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn reports_are_byte_identical_and_written_to_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let args = [
        "gates",
        "--grid",
        "d=2..3,n=1..2,p=4..5",
        "--output",
        out_path.to_str().unwrap(),
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let written = std::fs::read(&out_path).unwrap();
    assert_eq!(written, first.stdout[..written.len()].to_vec());
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn config_override_is_applied_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{"seed": 3, "tolerances": {"tau_rank": 1e-5}}"#,
    )
    .unwrap();
    let out = run(&[
        "dims",
        "--d",
        "2",
        "--n",
        "2",
        "--config",
        cfg_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["config"]["tolerances"]["tau_rank"], 1e-5);

    std::fs::write(&cfg_path, r#"{"tolerances": {"tau_newton": -1.0}}"#).unwrap();
    let out = run(&[
        "dims",
        "--d",
        "2",
        "--n",
        "2",
        "--config",
        cfg_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_reports() {
    let args = [
        "witness",
        "--d",
        "2",
        "--n",
        "2",
        "--periods",
        "4,4,4,4,4,4",
    ];
    let serial = run(&args);
    let threaded = Command::new(bin())
        .args(args)
        .env("MULTISPEC_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(threaded.status.code(), Some(0));
    let mut a = report(&serial);
    let mut b = report(&threaded);
    // the echoed config records the thread cap; the payload must not move
    a["config"]["threads"] = Value::Null;
    b["config"]["threads"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("multispec"));
}
