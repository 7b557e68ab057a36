//! End-to-end checks of the `ionq` binary: exit codes and CSV shape.

use std::process::Command;

fn ionq(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ionq"))
        .args(args)
        .output()
        .expect("binary should launch")
}

#[test]
fn spectrum_emits_csv_with_header() {
    let out = ionq(&["spectrum", "--n", "4", "--mask", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "basis_state,energy");
    assert_eq!(lines.count(), 16);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("lambda_min"));
}

#[test]
fn shots_reports_estimate_fields() {
    let out = ionq(&[
        "shots", "--p", "0.7", "--m", "10000", "--eps01", "0.05", "--eps10", "0.02",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p_ml"));
    assert!(text.contains("variance"));
}

#[test]
fn usage_errors_exit_with_code_2() {
    let out = ionq(&["spectrum", "--n", "4"]); // missing --mask
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_code_1() {
    let out = ionq(&["spectrum", "--n", "4", "--mask", "99"]); // mask ≥ 2^6
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8(out.stderr).unwrap().is_empty());
}

#[test]
fn toffoli_verify_succeeds_for_small_k() {
    let out = ionq(&["toffoli-verify", "--k", "3", "--identities"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("max |Δ|"));
    assert!(text.contains("generalized identity holds: true"));
}

#[test]
fn seed_makes_training_deterministic() {
    let run = || {
        let out = ionq(&[
            "--seed", "5", "train", "--n", "6", "--mask", "3", "--variant", "symmetric",
            "--max-depth", "3", "--desk-scale",
        ]);
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run(), run());
}
