use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mindist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mindist")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_writes_parsable_instances() {
    let o = mindist(&["gen", "planted", "--n", "4", "--m", "8", "--seed", "1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("maxnand 1 4 8"));
    assert_eq!(mindist::io::parse_instance(&text).unwrap().m(), 8);
}

#[test]
fn reduce_writes_manifest_and_code() {
    let dir = tempfile::tempdir().unwrap();
    let psi = dir.path().join("psi.txt");
    let art = dir.path().join("art");
    assert!(mindist(&["gen", "planted", "--n", "3", "--m", "4", "-o", p(&psi)]).status.success());
    let o = mindist(&["reduce", "-i", p(&psi), "--target", "md2", "-o", p(&art)]);
    assert!(o.status.success());
    let m = json(&o);
    assert_eq!(m["format"], "mindist-artifact 1");
    assert_eq!(m["injective"], true);
    assert!(art.join("output.gfcode").exists());
    assert!(art.join("intended.txt").exists());

    let d = mindist(&["distance", "--exact", "-i", p(&art.join("output.gfcode"))]);
    assert!(d.status.success());
    assert!(json(&d)["distance"].as_u64().unwrap() > 0);
}

#[test]
fn ncp_artifact_is_affine() {
    let dir = tempfile::tempdir().unwrap();
    let psi = dir.path().join("psi.txt");
    let art = dir.path().join("art");
    assert!(mindist(&["gen", "contradiction", "--pad", "3", "-o", p(&psi)]).status.success());
    assert!(mindist(&["reduce", "-i", p(&psi), "--target", "ncp2", "-o", p(&art)]).status.success());
    let d = mindist(&["distance", "--exact", "-i", p(&art.join("output.gfaffine"))]);
    assert!(d.status.success());
    // one of three constraints must fail: 2 * 1 + 3 * 1
    assert_eq!(json(&d)["distance"], 5);
}

#[test]
fn verify_reports_pass() {
    let o = mindist(&["verify", "lemma9", "--q", "3", "--d", "2"]);
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["lemma"], "lemma9");
    assert_eq!(r["measured"], 3);
    assert_eq!(r["pass"], true);
}

#[test]
fn report_flag_writes_the_same_json() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let o = mindist(&["verify", "claim11", "--q", "4", "--report", p(&rep)]);
    assert!(o.status.success());
    let a: Value = serde_json::from_slice(&o.stdout).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    // usage error
    assert_eq!(mindist(&["verify"]).status.code(), Some(1));
    assert_eq!(mindist(&["--help"]).status.code(), Some(0));
    // q = 2 belongs to the binary reduction
    let dir = tempfile::tempdir().unwrap();
    let psi = dir.path().join("psi.txt");
    assert!(mindist(&["gen", "contradiction", "-o", p(&psi)]).status.success());
    assert_eq!(mindist(&["experiment", "soundness", "-i", p(&psi), "--q", "2"]).status.code(), Some(1));
    // enumeration over budget
    let big = dir.path().join("big.txt");
    assert!(mindist(&["gen", "contradiction", "--pad", "3", "-o", p(&big)]).status.success());
    let o = mindist(&["--budget", "4", "experiment", "soundness", "-i", p(&big), "--target", "md2"]);
    assert_eq!(o.status.code(), Some(2));
    // malformed input carries a line number
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "maxnand 1 2 1\n1 2\n").unwrap();
    let o = mindist(&["reduce", "-i", p(&bad), "-o", p(&dir.path().join("x"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn completeness_rejects_unsatisfiable() {
    let dir = tempfile::tempdir().unwrap();
    let psi = dir.path().join("psi.txt");
    assert!(mindist(&["gen", "contradiction", "--pad", "2", "-o", p(&psi)]).status.success());
    let o = mindist(&["experiment", "completeness", "-i", p(&psi)]);
    assert_eq!(o.status.code(), Some(1));
}
