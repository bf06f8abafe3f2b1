use std::process::{Command, Output};

use kszforms::ksz::sample_signs;
use kszforms::{Shape, SignTensor};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kszforms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn constants_report() {
    let v = stdout_json(&run(&["constants", "-d", "2", "-p", "inf,inf", "-n", "4,4"]));
    assert_eq!(v["gamma"], 2.0);
    for key in ["c_d", "r", "lambda", "bound", "level"] {
        assert!(v[key].as_f64().unwrap() > 0.0, "{key}");
    }
    let v = stdout_json(&run(&["constants", "-d", "1", "-p", "2", "-n", "1"]));
    assert_eq!(v["gamma"], 2.0);
    let c1 = 8.0 * 5f64.ln().sqrt() * 1f64.powf(0.5);
    assert!((v["bound"].as_f64().unwrap() - c1).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["constants", "-d", "2", "-p", "inf,inf"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "-n", "2,2,2", "-p", "inf,inf"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "-n", "2", "-p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["window", "-n", "2,2", "-p", "1.5,2"]).status.code(), Some(2));
    let out = run(&["hl", "--rho", "1,1", "-p", "inf,inf", "--blocks", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("error:"));
}

#[test]
fn exhaustion_exits_with_three() {
    let out = run(&["sample", "-n", "64,64,64", "-p", "inf"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["window", "-n", "3,3,3", "-p", "4", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sampling_is_reproducible() {
    let a = run(&["sample", "-n", "4,4", "-p", "inf,inf", "--seed", "7"]);
    let b = run(&["sample", "-n", "4,4", "-p", "inf,inf", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let tensor: SignTensor = serde_json::from_value(v["tensor"].clone()).unwrap();
    assert_eq!(tensor, sample_signs(&Shape::new(vec![4, 4]).unwrap(), kszforms::ksz::draw_seed(7, 0)));
    assert!(v["norm_report"]["upper"].as_f64().unwrap() <= v["threshold"].as_f64().unwrap());
}

#[test]
fn hadamard_norm_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, r#"{"dims":[2,2],"signs":"4A=="}"#).unwrap();
    let v = stdout_json(&run(&["norm", "--tensor", path.to_str().unwrap(), "-p", "2,2"]));
    for side in ["lower", "upper"] {
        assert!((v[side].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);
    }
    let v = stdout_json(&run(&["norm", "--tensor", path.to_str().unwrap(), "-p", "inf"]));
    assert_eq!(v["upper"], 2.0);

    std::fs::write(&path, r#"{"dims":[2,2],"signs":"4Q=="}"#).unwrap();
    assert_eq!(run(&["norm", "--tensor", path.to_str().unwrap(), "-p", "2"]).status.code(), Some(2));
}

#[test]
fn hl_report() {
    let v = stdout_json(&run(&["hl", "--rho", "1,1", "-p", "inf,inf", "-d", "2"]));
    assert_eq!(v["verdict"]["admissible"], false);
    assert_eq!(v["verdict"]["worst_subset"], serde_json::json!([1, 2]));
    assert_eq!(v["blow_up_exponent"], 0.5);

    let v = stdout_json(&run(&["hl", "--rho", "1.5", "-p", "2", "-d", "2"]));
    assert!(v["blow_up_exponent"].is_null());
    assert!(v["blow_up_note"].as_str().unwrap().contains("1/2"));
}

#[test]
fn output_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let out = run(&[
        "window", "-n", "2,2", "-p", "inf,inf", "--trials", "16", "--format", "csv", "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,trial,norm_lower,norm_upper,ratio,method"));
    assert_eq!(lines.count(), 16);

    let out = run(&["sweep", "-d", "2", "-n", "2,4", "-p", "inf", "--rho", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("d,n,rho_list,p_list,hl_lhs,ksz_bound,ratio\n2,2,1;1,inf;inf,4,"));
}

#[test]
fn every_subcommand_documents_its_formula() {
    let expected = [
        ("constants", "C_d"),
        ("sample", "2 sqrt(2) R"),
        ("norm", "||A||"),
        ("window", "f = (sum n_k^{1/2})"),
        ("hl", "blow_up = max"),
        ("sweep", "ratio  = hl_lhs / bound"),
    ];
    for (cmd, needle) in expected {
        let out = run(&[cmd, "--help"]);
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains(needle), "{cmd} --help lacks {needle}");
    }
}
