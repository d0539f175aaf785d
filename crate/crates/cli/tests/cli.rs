//! End-to-end tests of the `dmd-filter` binary: output determinism, exit
//! codes, and agreement with direct library calls.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use approx::assert_abs_diff_eq;

use dmd_filter::empirical::{assemble_blocks, empirical_covariances, empirical_filter_matrix, BlockMode};
use dmd_filter::io::parse_pair_csv;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dmd-filter"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn simulate_is_byte_deterministic() {
    let a = run_ok(&["simulate", "--v", "0.5", "--sigma", "1", "--steps", "10", "--seed", "7"]);
    let b = run_ok(&["simulate", "--v", "0.5", "--sigma", "1", "--steps", "10", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());

    let c = run_ok(&["simulate", "--v", "0.5", "--sigma", "1", "--steps", "10", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn simulate_zero_noise_decay() {
    let out = run_ok(&[
        "simulate", "--v", "0.5", "--sigma", "0", "--steps", "2", "--seed", "0", "--init", "fixed",
        "--x0", "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,alpha,d_alpha,w0");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.5);
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.25);
    assert_eq!(row[2], "");
}

#[test]
fn burn_in_discards_prefix() {
    let with = run_ok(&[
        "simulate", "--v", "0.5", "--sigma", "1", "--steps", "5", "--seed", "3", "--init",
        "fixed", "--x0", "100", "--burn-in", "50",
    ]);
    let text = String::from_utf8(with.stdout).unwrap();
    // 1 header + 5 step rows + final state row
    assert_eq!(text.lines().count(), 7);
    let first_state: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(first_state.abs() < 50.0, "burn-in not applied: {first_state}");
}

#[test]
fn filter_cli_matches_library(
) {
    let dir = tempfile::tempdir().unwrap();
    let pair_path = dir.path().join("pair.csv");
    run_ok(&[
        "simulate-pair", "--v0", "0.4", "--sigma0", "1", "--v", "0.5", "--sigma", "1", "--rho-w",
        "0.6", "--steps", "500", "--seed", "42", "--out", pair_path.to_str().unwrap(),
    ]);

    let out = run_ok(&["filter", "--input", pair_path.to_str().unwrap()]);
    let stderr = String::from_utf8(out.stderr).unwrap();

    let pair = parse_pair_csv(&fs::read_to_string(&pair_path).unwrap()).unwrap();
    let emp = empirical_covariances(&pair).unwrap();
    let (cross, obs) = assemble_blocks(&emp, BlockMode::Raw);
    let phi = empirical_filter_matrix(&cross, &obs).unwrap();

    let kv: Vec<f64> = stderr
        .lines()
        .filter(|l| l.starts_with("phi"))
        .map(|l| l.split('=').nth(1).unwrap().trim().parse().unwrap())
        .collect();
    assert_eq!(kv.len(), 4);
    assert_eq!(kv[0], phi.phi11);
    assert_eq!(kv[1], phi.phi12);
    assert_eq!(kv[2], phi.phi21);
    assert_eq!(kv[3], phi.phi22);

    // estimates CSV present on stdout
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("k,alpha_hat,d_alpha_hat\n"));
    assert_eq!(stdout.lines().count(), 501);
}

#[test]
fn structured_filter_requires_drift() {
    let dir = tempfile::tempdir().unwrap();
    let pair_path = dir.path().join("pair.csv");
    run_ok(&[
        "simulate-pair", "--v0", "0.4", "--sigma0", "1", "--v", "0.5", "--sigma", "1", "--rho-w",
        "0.6", "--steps", "50", "--seed", "1", "--out", pair_path.to_str().unwrap(),
    ]);
    let out = run(&[
        "filter", "--input", pair_path.to_str().unwrap(), "--mode", "structured",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "filter", "--input", pair_path.to_str().unwrap(), "--mode", "structured", "--v", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn estimate_recovers_drift_on_a_long_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let pair_path = dir.path().join("pair.csv");
    run_ok(&[
        "simulate-pair", "--v0", "0.4", "--sigma0", "1", "--v", "0.5", "--sigma", "1", "--rho-w",
        "0.6", "--steps", "100000", "--seed", "2027", "--out", pair_path.to_str().unwrap(),
    ]);
    let out = run_ok(&["estimate", "--input", pair_path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v0_hat: f64 = text
        .lines()
        .find(|l| l.starts_with("v0_hat"))
        .unwrap()
        .split('=')
        .nth(1)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert_abs_diff_eq!(v0_hat, 0.4, epsilon = 0.05);
}

#[test]
fn error_subcommand_reports_closed_form_and_mc_rows() {
    let out = run_ok(&[
        "error", "--v0", "0.4", "--sigma0", "1", "--v", "0.5", "--sigma", "1", "--rho-w", "0.6",
        "--steps", "20000", "--seed", "3",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "g11,g12,g22,trace,gamma_ab");
    let theory: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    let mc: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert_abs_diff_eq!(theory[0] + theory[2], theory[3], epsilon = 1e-12);
    // Monte Carlo row should land near the closed form at this horizon.
    assert_abs_diff_eq!(mc[0], theory[0], epsilon = 0.1);
    assert_abs_diff_eq!(mc[2], theory[2], epsilon = 0.1);
}

#[test]
fn exit_codes_follow_error_classes() {
    // usage: unknown flag
    let out = run(&["simulate", "--nope", "1"]);
    assert_eq!(out.status.code(), Some(1));

    // domain: drift outside (0, 2)
    let out = run(&["simulate", "--v", "2.5", "--sigma", "1", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(2));

    // domain: correlation outside [-1, 1]
    let out = run(&[
        "simulate-pair", "--v0", "0.4", "--sigma0", "1", "--v", "0.5", "--sigma", "1", "--rho-w",
        "1.5", "--steps", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // usage: malformed config
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "nonsense\n").unwrap();
    let out = run(&["study", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // usage: missing file
    let out = run(&["estimate", "--input", "/nonexistent/pair.csv"]);
    assert_eq!(out.status.code(), Some(1));

    // help exits 0
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn study_runs_from_config_and_emits_sorted_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("study.conf");
    let out_path = dir.path().join("records.csv");
    fs::write(
        &cfg_path,
        format!(
            "v0 = 0.4\nsigma0 = 1\nv = 0.5\nsigma = 1\nrho_w = 0.6\n\
             horizons = 2000\nreplicas = 3\nmaster_seed = 5\nstudy = error_validation\n\
             out = {}\n",
            out_path.display()
        ),
    )
    .unwrap();
    let out = run(&["study", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let records =
        dmd_filter_cli::record::parse_records_csv(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(records.len(), 3);
    assert!(records.windows(2).all(|w| w[0].replica < w[1].replica));

    // JSON-lines mirror
    let out = run_ok(&[
        "study", "--config", cfg_path.to_str().unwrap(), "--format", "json", "--out",
        dir.path().join("records.jsonl").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let jsonl = fs::read_to_string(dir.path().join("records.jsonl")).unwrap();
    let parsed = dmd_filter_cli::record::parse_records_jsonl(&jsonl).unwrap();
    assert_eq!(parsed.len(), 3);
}

#[test]
fn json_format_emits_one_object_per_row() {
    let out = run_ok(&[
        "simulate", "--v", "0.5", "--sigma", "1", "--steps", "3", "--seed", "1", "--format",
        "json",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("k").is_some());
        assert!(v.get("alpha").is_some());
    }
}

#[test]
fn out_flag_and_stdout_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let stdout = run_ok(&["simulate", "--v", "0.7", "--sigma", "1", "--steps", "9", "--seed", "4"]);
    run_ok(&[
        "simulate", "--v", "0.7", "--sigma", "1", "--steps", "9", "--seed", "4", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(stdout.stdout, fs::read(Path::new(&path)).unwrap());
}
