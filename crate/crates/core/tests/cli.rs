use std::process::{Command, Output};

use serde_json::Value;
use weyl_tasep::rational::{parse_q, q};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl-tasep")).args(args).env_remove("WEYL_TASEP_SEED").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

/// Every string leaf that looks like a rational must be one, in lowest terms.
fn assert_rationals_exact(v: &Value) {
    match v {
        Value::String(s) if s.chars().all(|c| c.is_ascii_digit() || c == '/' || c == '-') && !s.is_empty() => {
            let x = parse_q(s).unwrap();
            assert_eq!(x.to_string(), *s, "not in lowest terms");
        }
        Value::Array(xs) => xs.iter().for_each(assert_rationals_exact),
        Value::Object(m) => m.values().for_each(assert_rationals_exact),
        _ => {}
    }
}

#[test]
fn limiting_direction_text() {
    assert_eq!(stdout(&["limdir", "--kind", "D", "--n", "4"]).trim(), "0, 5/58, 19/116, 1/4");
    assert_eq!(stdout(&["limdir", "--kind", "D", "--n", "4", "--method", "exact"]).trim(), "0, 5/58, 19/116, 1/4");
}

#[test]
fn partition_text_and_csv() {
    assert_eq!(stdout(&["partition", "--model", "b", "--n", "4", "--n0", "1"]).trim(), "56");
    let csv = stdout(&["--format", "csv", "partition", "--model", "b", "--n", "4", "--n0", "1"]);
    assert_eq!(csv.lines().collect::<Vec<_>>(), ["n,n0,z", "4,1,56"]);
}

#[test]
fn decimal_companions_never_replace_fractions() {
    let out = stdout(&["--decimal", "4", "limdir", "--kind", "B", "--n", "3"]);
    assert_eq!(out.trim(), "1/15 (0.0666), 1/5 (0.2000), 1/3 (0.3333)");
    let v = json(&["--decimal", "3", "limdir", "--kind", "B", "--n", "3"]);
    assert_eq!(v["result"]["coefficients"][0], serde_json::json!({"value": "1/15", "decimal": "0.066"}));
}

#[test]
fn json_outputs_follow_the_schema() {
    let cases: [&[&str]; 6] = [
        &["limdir", "--kind", "C", "--n", "3"],
        &["partition", "--model", "d", "--n", "5", "--n0", "2"],
        &["corr", "--model", "b", "--n", "4", "--quantity", "pair", "--n0", "1"],
        &"stationary --model dstar --n 3 --n0 1 --alpha 1/2 --alpha-star 1/3 --beta 1 --beta-star 1/4"
            .split(' ')
            .collect::<Vec<_>>(),
        &["stationary", "--model", "multi", "--kind", "B", "--n", "2"],
        &["verify", "--suite", "identities", "--k-max", "4"],
    ];
    for args in cases {
        let v = json(args);
        let meta = &v["metadata"];
        assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"), "{args:?}");
        assert_eq!(meta["seed"], 0, "{args:?}");
        assert_eq!(meta["parameters"]["command"], args[0], "{args:?}");
        assert!(!v["result"].is_null(), "{args:?}");
        assert_rationals_exact(&v["result"]);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
    }
    let v = json(&["limdir", "--kind", "D", "--n", "4"]);
    let normalized: Vec<_> =
        v["result"]["normalized"].as_array().unwrap().iter().map(|x| parse_q(x.as_str().unwrap()).unwrap()).collect();
    assert_eq!(normalized, [q(0, 1), q(5, 29), q(19, 58), q(1, 2)]);
}

#[test]
fn seed_comes_from_environment_unless_overridden() {
    let out = Command::new(env!("CARGO_BIN_EXE_weyl-tasep"))
        .args(["--format", "json", "limdir", "--kind", "B", "--n", "2"])
        .env("WEYL_TASEP_SEED", "17")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metadata"]["seed"], 17);
    assert_eq!(json(&["--seed", "5", "limdir", "--kind", "B", "--n", "2"])["metadata"]["seed"], 5);
}

#[test]
fn monte_carlo_is_reproducible() {
    let args: Vec<_> = "stationary --model two-species --kind B --n 3 --n0 1 --method mc --steps 20000 --trials 2"
        .split(' ')
        .collect();
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn verify_suites_pass() {
    for suite in ["tables", "identities", "lumping", "tworow"] {
        let mut args = vec!["verify", "--suite", suite];
        if suite != "tables" {
            args.extend(["--k-max", "3"]);
        }
        let out = run(&args);
        assert!(out.status.success(), "{suite}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn walk_writes_svg() {
    let dir = std::env::temp_dir().join(format!("weyl-tasep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("walk.svg");
    let v =
        json(&["walk", "--kind", "B", "--n", "2", "--steps", "20000", "--trials", "2", "--svg", svg.to_str().unwrap()]);
    assert!(v["result"]["direction_estimate"].as_array().unwrap().len() == 2);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_arguments_exit_with_two() {
    let bad: [&[&str]; 5] = [
        &["limdir", "--kind", "X", "--n", "3"],
        &["partition", "--model", "b", "--n", "2", "--n0", "5"],
        &["stationary", "--model", "dstar", "--n", "3", "--n0", "1", "--alpha", "0"],
        &["stationary", "--model", "dstar", "--n", "3", "--n0", "1", "--alpha", "1/0"],
        &["frobnicate"],
    ];
    for args in bad {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
