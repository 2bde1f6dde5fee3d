use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_banach-cover"))
        .args(args)
        .env_remove("BANACH_COVER_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn reals(v: &Value) -> Vec<f64> {
    v.as_array().expect("array").iter().map(|x| x.as_f64().expect("number")).collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn project_examples() {
    let out = run(&["project", "--set", "ball", "--r", "1", "--p", "2", "--x", "3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "banach-cover/1");
    let y = reals(&v["projection"]);
    assert!((y[0] - 0.6).abs() < 1e-15 && (y[1] - 0.8).abs() < 1e-15);
    assert!((v["distance"].as_f64().unwrap() - 4.0).abs() < 1e-15);

    let v = json(&run(&["project", "--set", "cone", "--p", "2", "--weights", "1,1", "--x", "2,-3"]));
    assert_eq!(reals(&v["projection"]), vec![2.0, 0.0]);

    let v = json(&run(&["project", "--set", "cylinder", "--r", "1", "--p", "2", "--mask", "1,2", "--x", "3,4,7"]));
    let y = reals(&v["projection"]);
    assert!((y[0] - 0.6).abs() < 1e-15 && (y[1] - 0.8).abs() < 1e-15);
    assert_eq!(y[2], 7.0);
    assert_eq!(v["set"]["mask"], serde_json::json!([1, 2]));
}

#[test]
fn input_errors_exit_2_and_name_the_field() {
    for (args, field) in [
        (vec!["project", "--set", "ball", "--r", "1", "--x", "3,oops"], "--x"),
        (vec!["project", "--set", "ball", "--r", "1", "--p", "0.5", "--x", "3,4"], "--p"),
        (vec!["project", "--set", "ball", "--r", "-1", "--x", "3,4"], "--r"),
        (vec!["project", "--set", "cylinder", "--r", "1", "--mask", "4", "--x", "3,4"], "--mask"),
        (vec!["project", "--set", "cone", "--weights", "1,2,3", "--x", "3,4"], "--weights"),
        (vec!["covering", "--set", "identity", "--lambda", "1.2", "--x", "1,2"], "--lambda"),
        (vec!["fixpoint", "--example", "6.6"], "--example"),
        (vec!["fixpoint", "--example", "6.7", "--lambda", "0.4"], "--lambda"),
        (vec!["fixpoint", "--example", "6.7", "--alpha", "0.2"], "--alpha"),
        (vec!["fixpoint", "--example", "6.7", "--s-grid", "0:1"], "--s-grid"),
        (vec!["verify", "--suite", "everything"], "--suite"),
        (vec!["verify", "--suite", "duality", "--tol", "nonsense=1"], "--tol"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(field), "{args:?}: {}", stderr(&out));
    }
    // clap's own usage errors share the code
    assert_eq!(run(&["project", "--set", "torus", "--x", "1"]).status.code(), Some(2));
}

#[test]
fn covering_examples_pass() {
    let v = json(&run(&["covering", "--set", "ball", "--r", "1", "--x", "0.3,0.4,0"]));
    assert_eq!(v["report"]["alpha_hat"].as_f64().map(|a| (a - 1.0).abs() <= 1e-9), Some(true));
    assert_eq!(v["passed"], true);

    let out = run(&["covering", "--set", "cone", "--p", "3", "--weights", "1,2,0.5", "--x", "1,-2,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["alpha_hat"], 0.0);
    assert!(stderr(&out).starts_with("PASS"));

    let v = json(&run(&["covering", "--set", "identity", "--lambda", "0.5", "--x", "1,-1"]));
    assert!((v["report"]["alpha_hat"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert_eq!(v["target"]["kind"], "identity");
}

#[test]
fn covering_reports_failure_with_exit_1() {
    // the supremum needs radii below the distance to the sphere; beyond it the estimate is 0
    let out = run(&["covering", "--set", "ball", "--r", "1", "--x", "0.3,0.4", "--eta-grid", "0.6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("FAIL"));
}

#[test]
fn covering_csv_is_lossless() {
    let out = run(&["covering", "--set", "ball", "--r", "1", "--x", "2,0", "--format", "csv", "--eta-grid", "0.1,1.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,per_eta_inf"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first, vec![0.1, 0.0]);
}

#[test]
fn fixpoint_quadratic_matches_closed_form() {
    let out = run(&["fixpoint", "--example", "6.7", "--s-grid", "0:0.99:0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 100);
    for r in records {
        let s = r["s"].as_f64().unwrap();
        let sigma = reals(&r["sigma"])[0];
        assert!((sigma - 2.0 * (1.0 - (1.0 - s).sqrt())).abs() <= 1e-8, "s = {s}");
    }
}

#[test]
fn fixpoint_other_examples() {
    let v = json(&run(&["fixpoint", "--example", "6.8"]));
    assert!(v["records"].as_array().unwrap().iter().all(|r| reals(&r["sigma"]) == vec![0.0]));

    let v = json(&run(&["fixpoint", "--example", "6.9", "--lambda", "1"]));
    for r in v["records"].as_array().unwrap() {
        let s = r["s"].as_f64().unwrap();
        let sigma = reals(&r["sigma"]);
        assert!((sigma[0] - 4.0 / 3.0 * s * s).abs() <= 1e-15 && sigma[1] == s.abs());
    }
}

#[test]
fn fixpoint_lists_failing_s_values() {
    // beyond s = 1 the quadratic has no real fixed point
    let out = run(&["fixpoint", "--example", "6.7", "--s-grid", "0.5,1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("s = 1.5"));
    let v = json(&out);
    assert_eq!(v["records"].as_array().unwrap().len(), 1);
    assert_eq!(v["failures"][0]["s"], 1.5);
}

#[test]
fn verify_passes_and_orders_checks() {
    let out = run(&["verify", "--suite", "duality", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn seed_env_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_banach-cover"))
        .args(["verify", "--suite", "duality", "--seed", "3"])
        .env("BANACH_COVER_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 11);
    let bad = Command::new(env!("CARGO_BIN_EXE_banach-cover"))
        .args(["verify", "--suite", "duality"])
        .env("BANACH_COVER_SEED", "eleven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("BANACH_COVER_SEED"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = std::env::temp_dir().join(format!("banach-cover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let paths = [dir.join("a.json"), dir.join("b.json")];
    for path in &paths {
        let out =
            run(&["covering", "--set", "cone", "--x", "1,-2,0.5", "--seed", "5", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
