use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn spreadlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spreadlab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timing(mut v: Value) -> Value {
    fn strip(v: &mut Value) {
        match v {
            Value::Object(map) => {
                map.remove("wall_time_ms");
                map.values_mut().for_each(strip);
            }
            Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    strip(&mut v);
    v
}

#[test]
fn passing_run_exits_zero_with_json_report() {
    let out = spreadlab(&["car", "--suite", "witness"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema"], "report_v1");
    assert_eq!(report["model"], "car");
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"][0]["name"], "witness");
    let ratio = report["suites"][0]["details"]["witness"]["ratio"].as_f64().unwrap();
    assert!((ratio - 2.25).abs() < 1e-12);
}

#[test]
fn same_seed_gives_same_report() {
    let args = ["monoid", "--seed", "7", "--samples", "50"];
    let (a, b) = (spreadlab(&args), spreadlab(&args));
    assert_eq!(without_timing(json(&a)), without_timing(json(&b)));
    let c = spreadlab(&["monoid", "--seed", "8", "--samples", "50"]);
    assert_eq!(json(&c)["seed"], 8);
}

#[test]
fn invalid_settings_exit_two() {
    assert_eq!(spreadlab(&["qdeformed", "--q", "1.2"]).status.code(), Some(2));
    assert_eq!(spreadlab(&["monotone", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(spreadlab(&["nomodel"]).status.code(), Some(2));
    assert_eq!(spreadlab(&["car", "--window", "5..1"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    // with no off-diagonal part the two-point function has no witness
    let out = spreadlab(&["car", "--suite", "witness", "--C", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn text_and_csv_formats() {
    let text = spreadlab(&["boolean", "--suite", "relations", "--format", "text"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("relations") && text.contains("overall: pass"));

    let csv = spreadlab(&["boolean", "--suite", "relations", "--format", "csv"]);
    let csv = String::from_utf8(csv.stdout).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("model,"));
    assert!(lines.next().unwrap().starts_with("boolean,relations"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, "model = \"boolean\"\nsuite = [\"simplex\"]\nseed = 3\nsamples = 5\nwindow = \"-2..2\"\n").unwrap();
    let out = spreadlab(&["--config", config.to_str().unwrap(), "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["model"], "boolean");
    assert_eq!(report["seed"], 11);
    assert_eq!(report["config"]["window"], serde_json::json!([-2, 2]));
    assert_eq!(report["suites"].as_array().unwrap().len(), 1);

    fs::write(&config, "model = \"car\"\nbogus = 1\n").unwrap();
    assert_eq!(spreadlab(&["--config", config.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_directory_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("reports");
    let out = spreadlab(&["car", "--suite", "stationary", "--format", "csv", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = fs::read_to_string(target.join("car-report.csv")).unwrap();
    assert_eq!(written, String::from_utf8(out.stdout).unwrap());
}
