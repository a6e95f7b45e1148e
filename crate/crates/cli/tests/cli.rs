use std::process::{Command, Output};

use serde_json::{json, Value};

fn jumploci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumploci"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data"))
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("JSON on stderr")
}

#[test]
fn h1_at_bs12_character() {
    let v = stdout_json(&jumploci(&["h1", "bs12.grp", "--field", "Q", "--char", "t=2,a=1"]));
    assert_eq!(v["dimH1"], 1);
    assert_eq!(v["basis"], json!([{"a": "1", "t": "0"}]));
}

#[test]
fn tree_classify_hyperbolic() {
    let v = stdout_json(&jumploci(&["tree", "classify", "--field", "Q", "--val", "p:2", "--matrix", "2,0,0,1"]));
    assert_eq!(v, json!({"kind": "hyperbolic", "length": 1}));
}

#[test]
fn tree_ball_dot_and_neighbors() {
    let out = jumploci(&["tree", "ball", "--radius", "1", "--dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph ball {"));
    assert_eq!(dot.matches(" -- ").count(), 3);
    let v = stdout_json(&jumploci(&["tree", "neighbors", "--field", "F3(t)", "--val", "pi:t"]));
    assert_eq!(v["neighbors"].as_array().unwrap().len(), 4);
    let v = stdout_json(&jumploci(&["tree", "busemann", "--matrix", "4,1,0,1"]));
    assert_eq!(v, json!({"busemann": 2, "limit": 2}));
}

#[test]
fn orbifold_genus_two_check() {
    let v = stdout_json(&jumploci(&["orbifold", "--genus", "2", "--field", "F5", "--check"]));
    assert_eq!(v["verdict"], "all-of-Hom");
    assert_eq!(v["agrees"], true);
    assert_eq!(v["check"]["checked"], 256);
}

#[test]
fn alexander_report() {
    let v = stdout_json(&jumploci(&["alexander", "bs16.grp", "--g0", "t"]));
    let primes: Vec<u64> = v["bnsRays"].as_array().unwrap().iter().map(|r| r["prime"].as_u64().unwrap()).collect();
    assert_eq!(primes, vec![2, 3]);
    assert!(v["records"].as_array().unwrap().iter().any(|r| r["character"]["t"] == "6"));
}

#[test]
fn jumplocus_over_f5() {
    let v = stdout_json(&jumploci(&["jumplocus", "bs12.grp", "--field", "F5"]));
    assert_eq!(v["characters"], 4);
    let ts: Vec<&str> = v["exceptional"].as_array().unwrap().iter().map(|r| r["character"]["t"].as_str().unwrap()).collect();
    assert_eq!(ts, vec!["1", "2"]);
}

#[test]
fn affine_action_exceptional() {
    let v = stdout_json(&jumploci(&["prop6", "bs12.grp", "--char", "t=2,a=1", "--cocycle", "a=1,t=0", "--val", "p:2"]));
    assert_eq!(v["classification"], "exceptional");
    assert_eq!(v["busemann"], json!({"a": 0, "t": 1}));
}

#[test]
fn mathematical_rejection_exits_one() {
    let out = jumploci(&["h1", "bs12.grp", "--char", "t=2,a=3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "invalid-character");
    let out = jumploci(&["prop6", "bs12.grp", "--char", "t=3,a=1", "--cocycle", "a=1,t=0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "invalid-cocycle");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(jumploci(&["h1", "bs12.grp"]).status.code(), Some(2));
    assert_eq!(jumploci(&["frobnicate"]).status.code(), Some(2));
    let out = jumploci(&["h1", "missing.grp", "--char", "t=2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");
    let out = jumploci(&["tree", "classify", "--matrix", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["alexander", "genus2.grp", "--char-p", "5"][..],
        &["jumplocus", "genus2.grp", "--field", "F3"][..],
    ] {
        let a = jumploci(args);
        let b = jumploci(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn selftest_subset() {
    let out = jumploci(&["selftest", "--only", "2,9", "--lines"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("[PASS]")).count(), 2);
    assert_eq!(jumploci(&["selftest", "--only", "42"]).status.code(), Some(2));
}
