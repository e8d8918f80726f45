use std::process::{Command, Output};

use serde_json::Value;

fn coarsebox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarsebox"))
        .args(args)
        .env_remove("COARSEBOX_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn integer_tower_radii() {
    let out = coarsebox(&["covers", "--group", "Z", "--stages", "4,8,12,16"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["command"], "covers");
    assert_eq!(report["passed"], true);
    let radii: Vec<i64> = report["suites"][0]["data"]["profile"]["radii"]["radii"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            assert_eq!(r[1], 1);
            r[0].as_i64().unwrap()
        })
        .collect();
    assert_eq!(radii, vec![1, 2, 3, 4]);
}

#[test]
fn vset_on_s3_passes() {
    let out = coarsebox(&["functors", "--demo", "vset", "--group", "S3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let checks = report["suites"][0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == true && c["cases"].as_u64().unwrap() > 0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.lines().all(|l| l.starts_with("PASS")), "{stderr}");
}

#[test]
fn malformed_stage_list_exits_one() {
    for stages in ["4,,8", "4,x", "1"] {
        let out = coarsebox(&["covers", "--stages", stages]);
        assert_eq!(out.status.code(), Some(1), "stages {stages:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn configuration_errors_exit_one() {
    assert_eq!(coarsebox(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(coarsebox(&["functors", "--demo", "nope"]).status.code(), Some(1));
    assert_eq!(coarsebox(&["functors", "--demo", "vset", "--group", "Q8"]).status.code(), Some(1));
    assert_eq!(coarsebox(&["expanders", "--pmax", "2"]).status.code(), Some(1));
}

#[test]
fn order_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_coarsebox"))
        .args(["covers", "--group", "z", "--stages", "4,64"])
        .env("COARSEBOX_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let bad = Command::new(env!("CARGO_BIN_EXE_coarsebox"))
        .args(["covers"])
        .env("COARSEBOX_MAX_ORDER", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["--seed", "7", "modules", "--pairs", "50", "--instances", "10"];
    let a = coarsebox(&args);
    let b = coarsebox(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn config_file_and_output_paths() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let report = dir.path().join("report.json");
    let csv = dir.path().join("family.csv");
    std::fs::write(
        &config,
        serde_json::json!({
            "seed": 3,
            "expanders": { "pmax": 7, "csv": csv },
        })
        .to_string(),
    )
    .unwrap();
    let out = coarsebox(&["--config", config.to_str().unwrap(), "--out", report.to_str().unwrap(), "expanders"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());

    let written: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(written["seed"], 3);
    let rows = written["suites"][0]["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.iter().map(|r| r["p"].as_u64().unwrap()).collect::<Vec<_>>(), vec![3, 5, 7]);

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["p", "order", "girth", "diameter", "ratio", "lambda2"]
    );
    let orders: Vec<u64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(orders, vec![24, 120, 336]);
}

#[test]
fn unknown_config_field_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{ "covers": { "stagez": [4] } }"#).unwrap();
    assert_eq!(coarsebox(&["--config", config.to_str().unwrap(), "covers"]).status.code(), Some(1));
}

#[test]
fn config_schema_lists_every_field() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/config.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let config = serde_json::to_value(coarsebox::cli::RunConfig::default()).unwrap();
    fn keys(v: &Value) -> Vec<String> {
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    }
    fn compare(schema: &Value, config: &Value, at: &str) {
        let props = &schema["properties"];
        assert_eq!(keys(props), keys(config), "fields of {at}");
        for (name, value) in config.as_object().unwrap() {
            if value.is_object() {
                compare(&props[name], value, name);
            }
        }
    }
    compare(&schema, &config, "config");
}
