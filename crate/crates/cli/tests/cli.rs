use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn witness(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witness"))
        .current_dir(dir)
        .env_remove("WITNESS_BUDGET")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const PATH5: &str = r#"{"kind":"nwt","nodes":[{"id":1,"terminal":false,"final":true},{"id":2,"terminal":false},
{"id":3,"terminal":false,"final":true},{"id":4,"terminal":false},{"id":5,"terminal":false,"final":true}],
"edges":[{"u":1,"v":2},{"u":2,"v":3},{"u":3,"v":4},{"u":4,"v":5}]}"#;

#[test]
fn gen_then_eval_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let out = witness(dir.path(), &["gen", "--family", "nwt-lb", "--q", "3", "--out", "nwt3.json"]);
    assert_eq!(out.status.code(), Some(0));
    let out = witness(dir.path(), &["eval", "--in", "nwt3.json", "--variant", "node", "--witness", "canonical"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["objective"], "53/30");
    assert_eq!(v["objective_decimal"], "1.766666666667");
    assert_eq!(v["laminar"], true);
}

#[test]
fn solve_nwt_path() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("path5.json"), PATH5).unwrap();
    let out = witness(dir.path(), &["solve-nwt", "--in", "path5.json", "--audit"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "41/30");
    assert_eq!(v["witness"]["edges"], serde_json::json!([[1, 3], [3, 5]]));
    for r in v["residuals"].as_array().unwrap() {
        let s = r["residual"].as_str().unwrap();
        assert!(!s.starts_with('-'), "negative residual {s}");
    }
}

#[test]
fn audit_useful6_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = witness(dir.path(), &["audit-lemmas", "--lemma", "useful6", "--range", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["audits"][0]["checked"], 99_998);
}

#[test]
fn claw_generation_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = witness(d, &["gen", "--family", "claw-lb", "--q", "11", "--out", "claw.json", "--witness-out", "w.json"]);
    assert_eq!(out.status.code(), Some(0));
    let check = json(&witness(d, &["check", "--in", "claw.json", "--witness", "w.json"]));
    assert_eq!(check["witness_valid"], true);
    assert_eq!(check["claw_free"], true);
    assert_eq!(check["crossing"], Value::Null);
    let a = witness(d, &["solve-claw", "--in", "claw.json", "--seed", "7"]);
    let b = witness(d, &["solve-claw", "--in", "claw.json", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "seeded runs must be byte-identical");
    let exact = json(&witness(d, &["solve-claw", "--in", "claw.json", "--exact-expectation"]));
    assert_eq!(exact["expectation"]["bound_ok"], true);
}

#[test]
fn oracle_budget_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // 8 terminals: within reach of the exhaustive oracle
    witness(d, &["gen", "--family", "random-ewt", "--n", "3", "--seed", "5", "--out", "r.json"]);
    let ok = witness(d, &["oracle", "--in", "r.json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    let ex = json(&witness(d, &["oracle", "--in", "r.json", "--exhaustive"]));
    assert_eq!(v["value"], ex["value"]);
    let small = witness(d, &["oracle", "--in", "r.json", "--budget", "2"]);
    assert_eq!(small.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&small.stderr).contains("budget"));
    let env = Command::new(env!("CARGO_BIN_EXE_witness"))
        .current_dir(d)
        .env("WITNESS_BUDGET", "2")
        .args(["oracle", "--in", "r.json"])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(1));
}

#[test]
fn laminarize_spider() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // center path u(0)-v(1); r1(2), r3(4) at u; r2(3), r4(5) at v
    let inst = r#"{"kind":"nwt","nodes":[{"id":0,"terminal":false},{"id":1,"terminal":false},
        {"id":2,"terminal":true},{"id":3,"terminal":true},{"id":4,"terminal":true},{"id":5,"terminal":true}],
        "edges":[{"u":0,"v":1},{"u":0,"v":2},{"u":0,"v":4},{"u":1,"v":3},{"u":1,"v":5}]}"#;
    std::fs::write(d.join("spider.json"), inst).unwrap();
    std::fs::write(d.join("w.json"), r#"{"edges":[[2,3],[4,5],[3,4]]}"#).unwrap();
    let out = witness(d, &["laminarize", "--in", "spider.json", "--witness", "w.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["laminar"], true);
    assert_eq!(v["before"], "11/6");
    let after: witness_core::Rational = v["after"].as_str().unwrap().parse().unwrap();
    assert!(after <= witness_core::q(5, 3));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.json"), "{not json").unwrap();
    assert_eq!(witness(d, &["eval", "--in", "bad.json", "--witness", "canonical"]).status.code(), Some(1));
    assert_eq!(witness(d, &["eval", "--in", "missing.json", "--witness", "canonical"]).status.code(), Some(1));
    assert_eq!(witness(d, &["audit-lemmas", "--lemma", "nope"]).status.code(), Some(1));
    assert_eq!(witness(d, &["gen", "--family", "nope", "--q", "1"]).status.code(), Some(1));
    // CA violation: three terminals on one Steiner node
    let star = r#"{"kind":"nwt","nodes":[{"id":0,"terminal":false},{"id":1,"terminal":true},
        {"id":2,"terminal":true},{"id":3,"terminal":true}],"edges":[{"u":0,"v":1},{"u":0,"v":2},{"u":0,"v":3}]}"#;
    std::fs::write(d.join("star.json"), star).unwrap();
    let out = witness(d, &["solve-nwt", "--in", "star.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CA-Node-Steiner"));
}

#[test]
fn invalid_witness_is_an_assertion_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    witness(d, &["gen", "--family", "nwt-lb", "--q", "1", "--out", "i.json"]);
    std::fs::write(d.join("w.json"), r#"{"edges":[[0,1]]}"#).unwrap();
    let out = witness(d, &["check", "--in", "i.json", "--witness", "w.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["witness_valid"], false);
}

#[test]
fn hashes_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    witness(d, &["gen", "--family", "nwt-lb", "--q", "2", "--out", "a.json"]);
    witness(d, &["gen", "--family", "nwt-lb", "--q", "2", "--out", "b.json"]);
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());
    let h = |f: &str| json(&witness(d, &["check", "--in", f]))["instance_sha256"].clone();
    assert_eq!(h("a.json"), h("b.json"));
    assert_eq!(h("a.json").as_str().unwrap().len(), 64);
}
