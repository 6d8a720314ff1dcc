use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricstab"))
        .args(args)
        .env_remove("TORICSTAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn futaki_of_hirzebruch_surface() {
    let out = run(&["futaki", "hirzebruch_fano"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["futaki"], serde_json::json!(["1/3", "1/3"]));
    assert_eq!(v["futaki_zero"], false);
    assert_eq!(v["verdict"], "UnstableAffine");
    assert_eq!(v["destabilizer_l"], "-2/3");
}

#[test]
fn j_norm_of_half_crease() {
    let out = run(&["jnorm", "interval", &data("crease_half.json")]);
    assert!(out.status.success());
    assert_eq!(json(&out), Value::String("1/8".into()));
    let out = run(&["lf", "interval", &data("crease_half.json")]);
    assert_eq!(json(&out), Value::String("1/4".into()));
    let out = run(&["ratio", "interval", &data("crease_half.json")]);
    assert_eq!(json(&out), Value::String("2/1".into()));
}

#[test]
fn check_reports_bad_vertex_with_exit_zero() {
    let out = run(&["check", &data("bad_triangle.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "NotDelzant");
    assert_eq!(v["valid"], false);
    let bad = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["point"] == serde_json::json!(["0/1", "1/1"]))
        .unwrap();
    assert_eq!(bad["determinant"], "-2");
    let out = run(&["check", "bad_triangle"]);
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn domain_errors_exit_one_with_code() {
    let out = run(&["delta", "hirzebruch_fano", "--max-depth", "1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["verdict"], "UnstableAffine");
    let out = run(&["ratio", "interval", &data("affine_x.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["code"], "AffineInput");
    let out = run(&["testconfig", "interval", &data("constant.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["code"], "DegenerateTestConfiguration");
    let out = run(&["check", "./interval"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["code"], "IoError");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["futaki"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["delta", "interval", "--max-depth", "x"]).status.code(), Some(2));
}

#[test]
fn emitted_json_round_trips() {
    let dir = std::env::temp_dir().join(format!("toricstab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    let path_s = path.to_string_lossy().into_owned();
    assert!(run(&["catalog", "--emit", "square(2)", "--out", &path_s]).status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    let out = run(&["check", &path_s]);
    assert_eq!(json(&out)["volume"], "4/1");
    let v: Value = serde_json::from_str(&first).unwrap();
    let again: toricstab::json::PolytopeJson = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&again).unwrap(), v);
    for args in [
        vec!["delta", "interval", "--max-depth", "1"],
        vec!["futaki", "square"],
        vec!["check", "cube"],
    ] {
        let out = run(&args);
        let v = json(&out);
        let text = serde_json::to_string(&v).unwrap();
        let reparsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(reparsed, v);
    }
    let report: toricstab::json::StabilityReportJson =
        serde_json::from_value(json(&run(&["delta", "interval", "--max-depth", "1"]))).unwrap();
    assert_eq!(report.delta.len(), 2);
    assert!(report.witness.unwrap().to_pl().is_ok());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn energy_and_ray_outputs() {
    let out = run(&["energy", "interval"]);
    assert!(out.status.success());
    let v = json(&out);
    let m = v["M"].as_f64().unwrap();
    assert!((m - (std::f64::consts::LN_2 - 1.5)).abs() < 1e-4);
    assert!(v["error_estimate"].as_f64().unwrap() < 1e-4);
    let out = run(&["ray", "interval", &data("crease_half.json"), "--t", "0,1,2,4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,M\n"));
    assert!(text.contains("L(f)=1/4"));
    let out = run(&["scal", "interval", "--spacing", "0.1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 5);
    assert!(text.contains("mean_scalar=2.0"));
    let out = run(&["energy", "interval", "--margin", "0.01", "--fd-step", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["code"], "InvalidGrid");
}

#[test]
fn catalog_lists_entries_and_threads_flag_is_accepted() {
    let out = run(&["--threads", "2", "catalog"]);
    assert!(out.status.success());
    let v = json(&out);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"hirzebruch_fano") && names.contains(&"cube"));
    let out = Command::new(env!("CARGO_BIN_EXE_toricstab"))
        .args(["futaki", "square"])
        .env("TORICSTAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
