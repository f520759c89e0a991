use std::process::{Command, Output};

use serde_json::Value;

fn weightcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weightcalc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn sequence_check_shorthand() {
    let out = weightcalc(&["seq", "check", "--spec", "gevrey:2", "--cond", "rai"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["reports"][0]["condition"], "rai");
    assert_eq!(v["result"]["reports"][0]["verdict"], "WitnessedUpToN");
    assert_eq!(v["config"]["n"], 64);
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "--matrix-spec", "power-family:1.5", "--alpha", "0.5"];
    let a = weightcalc(&args);
    let b = weightcalc(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn classify_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"kind": "constant", "sequence": {"kind": "gevrey_bar", "a": 2.0, "N": 128}}"#).unwrap();
    let out = weightcalc(&["classify", "--matrix", path.to_str().unwrap(), "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verdict"], "StableComposition");
}

#[test]
fn omega_classification() {
    let out = weightcalc(&["classify", "--omega-spec", "log-square:1.5", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verdict"], "StableComposition");
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(weightcalc(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(weightcalc(&["seq", "check", "--spec", "nope:1"]).status.code(), Some(64));
    assert_eq!(weightcalc(&["seq", "check", "--spec", "gevrey:1", "--set", "colour=red"]).status.code(), Some(64));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(weightcalc(&["seq", "check", path.to_str().unwrap()]).status.code(), Some(65));
    std::fs::write(&path, r#"{"kind": "gevrey"}"#).unwrap();
    assert_eq!(weightcalc(&["seq", "check", path.to_str().unwrap()]).status.code(), Some(65));
    // a computation error: the growth index needs 32 quotients
    assert_eq!(weightcalc(&["index", "gamma-m", "--spec", "gevrey:1:16"]).status.code(), Some(1));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# narrower run\nn = 48\ntau_stab = 0.04\n").unwrap();
    let out = weightcalc(&["--config", path.to_str().unwrap(), "--set", "gamma_width=0.03125", "index", "gamma-m", "--spec", "gevrey:1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["n"], 48);
    assert_eq!(v["config"]["tau_stab"], 0.04);
    let est = v["result"]["value"].as_f64().unwrap();
    assert!((est - 1.0).abs() <= 1.0 / 16.0, "{est}");
}

#[test]
fn gevrey_map_csv() {
    let out = weightcalc(&["map", "gevrey", "--alpha", "0.5:1.5:0.5", "--beta", "-1:2:1", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,beta,verdict,justification");
    assert_eq!(lines.len(), 1 + 3 * 4);
    assert!(lines.contains(&"0.5,-1,TrivialClass,TrivialRemark-ii"));
    assert!(lines.contains(&"0.5,0,NotStable,NarrowThm"));
    assert!(lines.contains(&"1,0,NotStable,ReductionRemark-iii"));
    assert!(lines.contains(&"1.5,0,TrivialClass,TrivialRemark-i"));
    assert!(lines.contains(&"1,2,StableComposition,NarrowThm"));
}

#[test]
fn qgevrey_demo() {
    let out = weightcalc(&["demo-qgevrey", "--q", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["result"]["max_log_rel_error"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["result"]["index"]["infinite"], true);
    for verdict in v["result"]["verdicts"].as_array().unwrap() {
        assert_eq!(verdict["verdict"], "StableComposition");
    }
}

#[test]
fn characteristic_commands() {
    let out = weightcalc(&["char", "jet", "--alpha", "1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let d = &json(&out)["result"]["derivs"];
    assert!((d[1][0].as_f64().unwrap() + 1.0 / 6.0).abs() < 1e-15);

    let out = weightcalc(&["char", "eval", "--alpha", "1", "--r", "1", "--theta", "0"]);
    let v = json(&out);
    let want = (-1f64).exp();
    assert!((v["result"]["estimate"]["value"][0].as_f64().unwrap() - want).abs() < 1e-12);

    let out = weightcalc(&["char", "bound-check", "--alpha", "0.5", "--theta", "-0.5,0,0.5"]);
    assert_eq!(json(&out)["result"]["verdict"], "WitnessedUpToN");

    let out = weightcalc(&["char", "eval", "--kernel", "g", "--alpha", "1.5", "--r", "1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn output_file_option() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = weightcalc(&["omega", "recover", "--spec", "log-square:2.718281828459045", "--n", "5", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let log_m = v["result"]["logM"].as_array().unwrap();
    assert!((log_m[3].as_f64().unwrap() - 9.0).abs() < 1e-6);
}

#[test]
fn inconclusive_verdict_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    std::fs::write(
        &path,
        r#"{"kind": "explicit", "grid": [1, 2], "rows": [
            {"kind": "gevrey_bar", "a": 0.2, "N": 64}, {"kind": "gevrey_bar", "a": 1.0, "N": 64}]}"#,
    )
    .unwrap();
    let out = weightcalc(&["classify", "--matrix", path.to_str().unwrap(), "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["verdict"], "Inconclusive");
}
