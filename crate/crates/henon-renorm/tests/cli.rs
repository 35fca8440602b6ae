use std::path::Path;
use std::process::{Command, Output};

use henon_renorm::experiments::ExperimentConfig;
use henon_renorm::unimodal::FixedPointDocument;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_henon-renorm"))
        .args(args)
        .env("HLAB_OUTPUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

#[test]
fn missing_config_file_is_an_error_with_usage() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["count", "--config", "/nonexistent/cfg.toml"]);
    assert_eq!(o.status.code(), Some(1));
    let err = text(&o.stderr);
    assert!(err.contains("cannot read") && err.contains("Usage"), "{err}");
}

#[test]
fn invalid_config_values_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "level_min = 0\n").unwrap();
    let o = run(dir.path(), &["count", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", text(&o.stderr));
}

#[test]
fn missing_subcommand_and_unknown_flags_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &[]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["count", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn count_prints_the_exact_measure() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["count", "--n", "12", "--b", "0.05", "--theta", "0.99"]);
    let out = text(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{out}{}", text(&o.stderr));
    let line = out.lines().find(|l| l.starts_with("mu(P_12) = ")).expect("measure line");
    let parts: Vec<&str> = line.trim_start_matches("mu(P_12) = ").split(" = ").collect();
    assert_eq!(parts.len(), 2, "{line}");
    let (p, q) = parts[0].split_once('/').expect("rational");
    let (p, q): (u64, u64) = (p.parse().unwrap(), q.parse().unwrap());
    assert!(q.is_power_of_two() && q <= 4096 && p <= q, "{line}");
    let f: f64 = parts[1].parse().unwrap();
    assert_eq!(f, p as f64 / q as f64);
    assert!(dir.path().join("count_report.json").exists());
    assert!(dir.path().join("count_count.csv").exists());
}

#[test]
fn solve_1d_writes_the_golden_document() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["solve-1d", "--degree", "40", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", text(&o.stdout), text(&o.stderr));
    let written: FixedPointDocument =
        serde_json::from_slice(&std::fs::read(dir.path().join("fixed_point_degree40.json")).unwrap()).unwrap();
    let golden: FixedPointDocument = serde_json::from_str(include_str!("golden/fixed_point_degree40.json")).unwrap();
    assert_eq!(written.degree, golden.degree);
    for (a, b) in written.coefficients.iter().zip(&golden.coefficients) {
        assert!((a - b).abs() <= 1e-13);
    }
    assert!((written.sigma - golden.sigma).abs() <= 1e-13);
}

#[test]
fn default_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--print-default-config"]);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.path().join("defaults.toml");
    std::fs::write(&path, &o.stdout).unwrap();
    let cfg = ExperimentConfig::load(&path).unwrap();
    assert_eq!(cfg.to_toml(), ExperimentConfig::default().to_toml());
    assert_eq!(cfg.hash(), ExperimentConfig::default().hash());
}

#[test]
fn out_flag_wins_over_the_environment() {
    let (env_dir, flag_dir) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let o = run(env_dir.path(), &["count", "--n", "10", "--out", flag_dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    assert!(flag_dir.path().join("count_report.json").exists());
    assert!(!env_dir.path().join("count_report.json").exists());
}
