use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrta-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn fixture_solves_both_tasks_under_rc() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = bench(&["fixture", "motivating"]);
    assert!(fixture.status.success());
    let path = write(dir.path(), "m.json", &String::from_utf8(fixture.stdout).unwrap());

    let rc = stdout_json(&bench(&["solve", "--instance", &path, "--solver", "flat_rc"]));
    assert_eq!(rc["solver"], "flat_rc");
    assert_eq!(rc["utility"], 194.0);
    let assignments = rc["assignments"].as_array().unwrap();
    assert_eq!(assignments.len(), 2);
    assert_eq!(rc["steps"].as_array().unwrap().len(), 2);
    assert_eq!(rc["steps"][0]["step"], 1);

    let mu = stdout_json(&bench(&["solve", "--instance", &path, "--solver", "flat_max_util"]));
    assert_eq!(mu["utility"], 98.0);
    assert_eq!(mu["assignments"].as_array().unwrap().len(), 1);
}

#[test]
fn instance_without_candidates_gives_empty_solution() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{
        "H": 1, "k": 1, "capability_costs": [0.0],
        "robots": [{"id": 0, "capabilities": [1.0]}],
        "tasks": [{"id": 0, "reward": 10.0, "configurations": [[2.0]]}],
        "cost_model": {"kind": "zero"}
    }"#;
    let path = write(dir.path(), "empty.json", doc);
    for solver in ["flat_max_util", "flat_rc", "flat_rca", "random_config", "exact"] {
        let out = stdout_json(&bench(&["solve", "--instance", &path, "--solver", solver]));
        assert_eq!(out["utility"], 0.0);
        assert!(out["assignments"].as_array().unwrap().is_empty());
    }
}

#[test]
fn exact_never_loses_to_heuristics() {
    let small = [
        "--num-robots", "5", "--num-tasks", "3", "--max-configs-per-task", "3", "--k", "3",
    ];
    for seed in ["1", "2", "3"] {
        let run = |solver: &str| {
            let mut args = vec!["solve", "--solver", solver, "--seed", seed];
            args.extend(small);
            stdout_json(&bench(&args))["utility"].as_f64().unwrap()
        };
        let opt = run("exact");
        for solver in ["flat_max_util", "flat_rc", "flat_rca", "random_config"] {
            assert!(run(solver) <= opt + 1e-9, "{solver} on seed {seed}");
        }
    }
}

#[test]
fn schema_violation_names_the_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{
        "H": 1, "k": 1, "capability_costs": [0.0],
        "robots": [{"id": 0, "capabilities": [1.0]}],
        "tasks": [{"id": 0, "reward": "lots", "configurations": [[1.0]]}],
        "cost_model": {"kind": "zero"}
    }"#;
    let path = write(dir.path(), "bad.json", doc);
    let out = bench(&["solve", "--instance", &path, "--solver", "flat_rc"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/tasks/0/reward"), "{stderr}");
}

#[test]
fn unknown_solver_is_a_usage_error() {
    let out = bench(&["solve", "--solver", "greedy"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown solver"));
}

#[test]
fn generation_is_byte_identical_per_seed() {
    let a = bench(&["gen", "--seed", "42"]);
    let b = bench(&["gen", "--seed", "42"]);
    let c = bench(&["gen", "--seed", "43"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["robots"].as_array().unwrap().len(), 8);
    assert_eq!(doc["H"], 7);
}

#[test]
fn sweep_csv_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let out = dir.path().join(name);
        let status = bench(&[
            "sweep", "--preset", "variants", "--runs", "20", "--seed", "7", "--no-timing",
            "--workers", workers, "--out", out.to_str().unwrap(),
        ]);
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        fs::read(out).unwrap()
    };
    let first = run("a.csv", "1");
    assert_eq!(first, run("b.csv", "1"));
    assert_eq!(first, run("c.csv", "3"));
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("swept_param,value,solver,mean_ratio"));
    // five values, four heuristics, one header
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn sweep_rejects_unknown_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let res = bench(&["sweep", "--preset", "moons", "--out", out.to_str().unwrap()]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("unknown preset"));
}
