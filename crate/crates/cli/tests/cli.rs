use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gnss-an-auth")).args(args).output().unwrap()
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "symbol-prediction", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    bin(&args)
}

#[test]
fn list_names_every_experiment() {
    let out = bin(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in gnss_an_auth::experiments::EXPERIMENTS {
        assert!(text.lines().any(|l| l == name), "{name} missing");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run_into(a.path(), &[]).status.success());
    assert!(run_into(b.path(), &[]).status.success());
    for f in ["symbol_prediction_an.csv", "symbol_prediction_no_an.csv"] {
        let x = fs::read(a.path().join(f)).unwrap();
        assert_eq!(x, fs::read(b.path().join(f)).unwrap(), "{f}");
        assert_eq!(String::from_utf8(x).unwrap().lines().count(), 101);
    }
}

#[test]
fn config_file_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# coarse grid\nt_frac_steps = 10\n").unwrap();
    let out = run_into(dir.path(), &["--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("symbol_prediction_an.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["run", "no-such-experiment", "--out", dir.path().to_str().unwrap()]);
    assert!(!out.status.success());
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "unknown_key = 3\n").unwrap();
    assert!(!run_into(dir.path(), &["--config", cfg.to_str().unwrap()]).status.success());
}

#[test]
fn check_passes() {
    let out = bin(&["check"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
