use std::path::Path;
use std::process::{Command, Output};

fn grandlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grandlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_names_every_experiment() {
    let out = grandlab(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["duality", "riesz-growth", "divergence-zL", "haar-bound"] {
        assert!(text.contains(id), "{id} missing from\n{text}");
    }
}

#[test]
fn catalog_is_json() {
    let out = grandlab(&["catalog"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 5);
}

#[test]
fn norm_of_bounded_function() {
    let out = grandlab(&["norm", "--space", "torus", "--resolution", "1024", "--function", "smooth_a", "--norm", "lp:p=2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // |e^{cos x}|_2^2 = I_0(2)
    let want = 2.279_585_302_336_067f64.sqrt();
    let got = v["report"]["value"].as_f64().unwrap();
    assert!((got - want).abs() < 1e-10, "{got} vs {want}");
}

#[test]
fn norm_rejects_unknown_norm() {
    let out = grandlab(&["norm", "--function", "g_m:m=1", "--norm", "sobolev:p=2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_writes_report_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "seed": 5, "experiments": [{"id": "fundamental-curve", "params": {}}]}"#,
    );
    let out_dir = dir.path().join("out");
    let out = grandlab(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 5);
    assert_eq!(report["passed"], true);
    assert!(out_dir.join("fundamental-curve.g-abab.csv").exists());
    let runtime: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("runtime.json")).unwrap()).unwrap();
    assert_eq!(runtime["threads"], 2);
}

#[test]
fn seed_flag_overrides_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "experiments": [{"id": "fundamental-curve", "params": {}}]}"#,
    );
    let out_dir = dir.path().join("out");
    let out = grandlab(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--seed", "77"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 77);
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // a tolerance no quadrature meets
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": 1, "experiments": [{"id": "fundamental-curve", "params": {"tolerance_abab": 1e-15}}]}"#,
    );
    let out = grandlab(&["run", "--config", &cfg, "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        r#"{"schema_version": 1, "experiments": [{"id": "no-such-experiment", "params": {}}]}"#,
        r#"{"schema_version": 9, "experiments": [{"id": "duality", "params": {}}]}"#,
        r#"{"schema_version": 1, "experiments": [{"id": "duality", "params": {"bogus": 1}}]}"#,
        r#"{"schema_version": 1, "experiments": []}"#,
        "not json",
    ] {
        let cfg = write_config(dir.path(), body);
        let out = grandlab(&["run", "--config", &cfg, "--out", dir.path().join("out").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{body}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!dir.path().join("out").join("report.json").exists());
    }
}

#[test]
fn missing_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = grandlab(&[
        "run",
        "--config",
        dir.path().join("absent.json").to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
