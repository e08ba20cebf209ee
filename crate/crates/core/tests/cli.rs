use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothlearn"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn analyze(game: &str, extra: &[&str]) -> Value {
    let mut args = vec!["analyze", "--game", game];
    args.extend_from_slice(extra);
    json(&run(&args))
}

#[test]
fn analyze_shapley_bimatrix() {
    let v = analyze("shapley2", &[]);
    assert!(v["rpoa"]["rho"].as_f64().unwrap().abs() <= 1e-6);
    assert_eq!(v["minty"]["feasible"], false);
}

#[test]
fn analyze_dominance_with_elimination() {
    let v = analyze("dominance", &["--after-elimination"]);
    assert!((v["rpoa"]["rho"].as_f64().unwrap() - 0.5).abs() <= 1e-6);
    let after = &v["after_elimination"];
    assert!((after["rpoa"]["rho"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
    assert_eq!(after["kept"], serde_json::json!([[1], [1]]));
    assert!(analyze("dominance", &[]).get("after_elimination").is_none());
}

#[test]
fn analyze_matching_pennies() {
    let v = analyze("mp", &[]);
    assert_eq!(v["minty"]["feasible"], true);
    assert_eq!(v["constant_sum"]["is_constant_sum"], true);
    assert!((v["rpoa"]["rho"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
    assert_eq!(v["rpoa"]["flagged_degenerate"], true);
    assert_eq!(v["lipschitz"].as_f64().unwrap(), 4.0);
}

#[test]
fn analyze_game_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(
        &path,
        r#"{"kind": "normal", "players": 2, "actions": [2, 2], "utilities": [[0, 0, 1, 1], [1, 0, 0, 1]]}"#,
    )
    .unwrap();
    let v = analyze(path.to_str().unwrap(), &["--z-min", "0"]);
    assert!((v["rpoa"]["rho"].as_f64().unwrap() - 0.5).abs() <= 1e-6);
    assert_eq!(v["opt"].as_f64().unwrap(), 2.0);
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&["simulate", "--game", "mp", "--steps", "50", "--out", out.to_str().unwrap()]);
    let summary = json(&o);
    assert_eq!(summary["steps"], 50);
    assert_eq!(summary["algorithm"], "ogd");
    assert_eq!(summary["eta"].as_f64().unwrap(), 1.0 / 16.0);
    assert_eq!(read(&out.join("trajectory.csv")).lines().count(), 51);
    assert_eq!(read(&out.join("metrics.csv")).lines().count(), 51);
    let on_disk: Value = serde_json::from_str(&read(&out.join("summary.json"))).unwrap();
    assert_eq!(on_disk, summary);
}

#[test]
fn simulate_cgd_and_empty_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cgd");
    let summary = json(&run(&["simulate", "--game", "random:2x3", "--alg", "cgd", "--steps", "20", "--seed", "3", "--out", out.to_str().unwrap()]));
    assert_eq!(summary["algorithm"], "cgd");

    let empty = dir.path().join("empty");
    json(&run(&["simulate", "--game", "mp", "--steps", "0", "--out", empty.to_str().unwrap()]));
    assert_eq!(read(&empty.join("trajectory.csv")), "t,x0_0,x0_1,x1_0,x1_1,negap,sw\n");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["simulate", "--game", "nope", "--out", out],
        vec!["simulate", "--game", "mp", "--eta", "-1", "--out", out],
        vec!["simulate", "--game", "mp", "--alg", "cgd", "--eta", "10", "--out", out],
        vec!["scan", "--count", "2", "--rows", "7"],
        vec!["analyze", "--game", "mp", "--ratio-bound", "0.5"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
}

#[test]
fn scan_output() {
    let o = run(&["scan", "--count", "0"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "seed,opt,rpoa,poa_worst,poa_best\n");

    let o = run(&["scan", "--count", "4", "--seed", "9"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("9,"));
    for line in &lines[1..] {
        let f: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(f[3] >= f[2] - 1e-6 && f[3] <= f[4]);
    }
}

#[test]
fn examples_report_all_criteria() {
    let o = run(&["examples"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
    assert!(text.ends_with("11 passed, 0 failed\n"));
}
