use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tractor-holo"));
    cmd.args(args).env_remove("TRACTOR_HOLO_SEED");
    if let Some(s) = env_seed {
        cmd.env("TRACTOR_HOLO_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn record<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no record {name}"))
}

#[test]
fn tensors_default_passes() {
    let out = run(&["tensors", "--manifold", "bivariate"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    let scal = record(&r, "scal");
    assert_eq!(scal["target"].as_f64(), Some(-4.5));
    assert!((scal["computed"].as_f64().unwrap() + 4.5).abs() < 1e-12);
    assert_eq!(record(&json(&run(&["tensors", "--manifold", "independence"], None)), "einstein_defect")["pass"], true);
}

#[test]
fn zero_tolerance_fails_with_exit_one() {
    let out = run(&["tensors", "--manifold", "independence", "--set", "tolerance=0"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL "));
    assert_eq!(json(&out)["status"], "fail");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["tensors"][..],
        &["tensors", "--manifold", ""],
        &["tensors", "--manifold", "trivariate"],
        &["tensors", "--manifold", "bivariate", "--point", "0,0,1,1,2"],
        &["verify-all", "--set", "delta_min=2"],
        &["verify-all", "--set", "no_such_key=1"],
        &["verify-all", "--set", "missing_equals"],
    ] {
        let out = run(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["tensors", "--manifold", "bivariate"], Some("abc")).status.code(), Some(2));
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# test config\nseed = 5\nn_random = 3\n").unwrap();
    let p = path.to_str().unwrap();
    let seed = |args: &[&str], env: Option<&str>| json(&run(args, env))["environment"]["seed"].as_u64().unwrap();
    let base = ["tensors", "--manifold", "independence", "--config", p];
    assert_eq!(seed(&base, None), 5);
    assert_eq!(seed(&base, Some("7")), 7);
    assert_eq!(seed(&[&base[..], &["--seed", "9"]].concat(), Some("7")), 9);
}

#[test]
fn out_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["tensors", "--manifold", "independence", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "tensors independence");

    let text = run(&["tensors", "--manifold", "independence", "--format", "text"], None);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("tractor-holo tensors independence: PASS"));
}

#[test]
fn holonomy_json_is_byte_identical() {
    let args = ["holonomy", "--manifold", "independence", "--seed", "11", "--set", "stability=false"];
    let (a, b) = (run(&args, None), run(&args, None));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(record(&r, "holonomy_dimension")["computed"], "10");
    assert_eq!(record(&r, "holonomy_label")["computed"], "SO^0(1,4)");
}
