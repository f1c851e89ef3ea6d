use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_asvnav"))
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_writes_outputs_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenarios().join("downstream.json");
    let o = run(&["run", sc.to_str().unwrap(), "--seed", "42"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let run_dir = dir.path().join("downstream");
    for f in ["mission.csv", "trajectory.csv", "errors.csv", "report.csv", "report.txt", "resolved_scenario.json"] {
        assert!(run_dir.join(f).exists(), "{f}");
    }
    let resolved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join("resolved_scenario.json")).unwrap()).unwrap();
    assert_eq!(resolved["seed"], 42);

    let before = std::fs::read(run_dir.join("report.csv")).unwrap();
    let r = bin().arg("report").arg(&run_dir).output().unwrap();
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("max cross-track error"));
    assert_eq!(std::fs::read(run_dir.join("report.csv")).unwrap(), before);
}

#[test]
fn incomplete_run_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(scenarios().join("calm.json")).unwrap()).unwrap();
    v["duration_limit"] = serde_json::json!(10.0);
    let p = dir.path().join("short.json");
    std::fs::write(&p, v.to_string()).unwrap();
    let o = run(&["run", p.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("INCOMPLETE"));
    let report = std::fs::read_to_string(dir.path().join("out/calm/report.csv")).unwrap();
    assert!(report.lines().last().unwrap().ends_with(",false"));
}

#[test]
fn bad_input_exits_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run", "/nonexistent/scenario.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = bin().arg("report").arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn suite_prints_table_and_rescoring_matches() {
    let dir = tempfile::tempdir().unwrap();
    let suite = scenarios().join("table1_suite.json");
    let o = run(&["suite", suite.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("Parallel With"));
    let table = std::fs::read(dir.path().join("table.csv")).unwrap();
    let r = bin().arg("report").arg(dir.path()).output().unwrap();
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(std::fs::read(dir.path().join("table.csv")).unwrap(), table);
}

#[test]
fn train_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = serde_json::json!({
        "origin": {"lat": 34.0, "lon": -81.0},
        "headings": [0, 90, 180, 270],
        "speeds": [1.5],
        "currents": [{"speed": 0.0, "direction": 0.0}, {"speed": 0.6, "direction": 120.0}, {"speed": 0.4, "direction": 200.0}],
        "winds": [{"speed": 8.0, "direction": 20.0}, {"speed": 5.0, "direction": 290.0}],
        "duration": 10.0
    });
    let p = dir.path().join("sweep.json");
    std::fs::write(&p, sweep.to_string()).unwrap();
    let o = run(&["train", p.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("24 runs"));
    let training = dir.path().join("training.csv");
    let model = dir.path().join("model.json");
    let o = bin().arg("fit").arg(&training).arg("-o").arg(&model).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(m["format"], "asvnav-effect-model");
    assert_eq!(m["version"], 1);
    let k = m["coefficients"][0][2].as_f64().unwrap();
    assert!((k - 0.03).abs() < 1e-6);

    let mut sc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(scenarios().join("downstream_augmented.json")).unwrap()).unwrap();
    sc["controller"] = serde_json::json!({"kind": "augmented", "model": {"file": "model.json"}});
    let sp = dir.path().join("fitted.json");
    std::fs::write(&sp, sc.to_string()).unwrap();
    let o = run(&["run", sp.to_str().unwrap()], &dir.path().join("runs"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
