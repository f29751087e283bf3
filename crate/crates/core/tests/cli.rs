use std::path::PathBuf;

use exlex::cli::{execute, parse_pair, Certificate};
use exlex::fixtures;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    execute(std::iter::once("exlex").chain(args.iter().copied()))
}

fn cert(args: &[&str]) -> (i32, Certificate) {
    let (code, out) = run(args);
    let c: Certificate = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    (code, c)
}

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("exlex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn point_table() -> Value {
    serde_json::from_str(fixtures::text("point_table").unwrap()).unwrap()
}

#[test]
fn theorem_a_on_fix_a() {
    let (code, c) = cert(&["theorem-a", "fixtures/fix_a.json"]);
    assert_eq!(code, 0);
    assert_eq!(c.result["is_abelian_equivalence"], true);
    assert_eq!(c.result["is_exact_embedding"], true);
}

#[test]
fn defects_on_fix_p_are_empty() {
    let (code, c) = cert(&["defects", "fix_p"]);
    assert_eq!(code, 0);
    assert_eq!(c.result["sigma"], serde_json::json!([]));
    assert_eq!(c.result["nonzero_defects"], serde_json::json!([]));
}

#[test]
fn verify_theorem_b_with_pair() {
    let (code, c) = cert(&["verify-theorem-b", "fixtures/fix_t.json", "--pair", "U=S1", "V=S1,S3"]);
    assert_eq!(code, 0, "{c:?}");
    assert!(c.passed());
    assert_eq!(c.result["heart_indecomposables"], 1);
}

#[test]
fn non_pair_is_a_fail_certificate() {
    let (code, c) = cert(&["heart", "fix_t", "--pair", "U=S1", "V=S2"]);
    assert_eq!(code, 1);
    let chk = c.checks.iter().find(|c| c.name == "cotorsion_pair").unwrap();
    assert_eq!(chk.witness.as_ref().unwrap()["kind"], "not_a_cotorsion_pair");
}

#[test]
fn corrupt_assoc_fails_with_exit_one() {
    let (code, c) = cert(&["validate", "corrupt_assoc"]);
    assert_eq!(code, 1);
    let a = c.checks.iter().find(|c| c.name == "associativity").unwrap();
    assert!(a.failed());
    assert!(a.witness.is_some());
}

#[test]
fn usage_and_load_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["validate"]).0, 2);
    assert_eq!(run(&["validate", "/nonexistent/nothing.json"]).0, 2);
    assert_eq!(run(&["validate", "fix_a", "--field", "p=4"]).0, 2);
    assert_eq!(run(&["heart", "fix_t", "--pair", "U=S1"]).0, 2);
}

#[test]
fn missing_cone_is_a_load_error() {
    let mut v = point_table();
    v["payload"]["cones"] = serde_json::json!({});
    let p = tmp("missing_cone.json", &v.to_string());
    let (code, out) = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("missing cone") && out.contains("id_X"), "{out}");
}

#[test]
fn dangling_label_is_named() {
    let mut v = point_table();
    v["payload"]["shift"]["objects"] = serde_json::json!({"X": "Y"});
    let p = tmp("dangling.json", &v.to_string());
    let (code, out) = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("`Y`"), "{out}");
}

#[test]
fn certificates_are_deterministic() {
    for args in [
        &["defects", "fix_a"][..],
        &["lex", "fix_t"],
        &["verify-theorem-b", "fix_t"],
        &["--format", "text", "cotorsion-enumerate", "fix_t"],
        &["--seed", "7", "theorem-a", "fix_p"],
    ] {
        assert_eq!(run(args), run(args), "{args:?}");
    }
}

#[test]
fn toml_mirror_matches_json() {
    let (_, a) = cert(&["def-simples", "fix_a.json"]);
    let (_, b) = cert(&["def-simples", "fix_a.toml"]);
    assert_eq!(a.result, b.result);
    assert_eq!(a.checks, b.checks);
}

#[test]
fn overrides_are_recorded() {
    let (_, c) = cert(&["--seed", "3", "--caps", "mult=1,samples=20", "--field", "Q", "def-simples", "fix_a"]);
    assert_eq!(c.options.seed, 3);
    assert_eq!(c.options.mult, 1);
    assert_eq!(c.options.samples, 20);
    assert_eq!(c.options.field, "Q");
}

#[test]
fn replay_reproduces() {
    let (_, out) = run(&["validate", "corrupt_assoc"]);
    let p = tmp("corrupt.cert.json", &out);
    let (code, r) = cert(&["replay", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{r:?}");
    assert!(r.checks.iter().any(|c| c.name == "replay.associativity"));

    // a tampered witness no longer reproduces
    let mut v: Value = serde_json::from_str(&out).unwrap();
    v["checks"][0]["witness"] = serde_json::json!({"kind": "associativity", "violations": []});
    let p = tmp("tampered.cert.json", &v.to_string());
    let (code, r) = cert(&["replay", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(r.checks.iter().any(|c| c.failed() && c.name == "replay.associativity"));
}

#[test]
fn selftest_passes() {
    let (code, c) = cert(&["selftest"]);
    assert_eq!(code, 0, "{:?}", c.checks.iter().filter(|c| c.failed()).collect::<Vec<_>>());
    assert!(c.checks.iter().any(|c| c.name == "corrupt_assoc.rejected"));
}

#[test]
fn text_format_lines() {
    let (code, out) = run(&["--format", "text", "heart-vs-mod-p", "fix_t"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("PASS") && l.contains("heart_vs_mod_p")));
    assert!(out.ends_with("status  PASS\n"), "{out}");
}

#[test]
fn pair_syntax() {
    let p = parse_pair(&["U=S1".into(), "V=S1,S3".into()]).unwrap();
    assert_eq!(p.u, vec!["S1"]);
    assert_eq!(p.v, vec!["S1", "S3"]);
    let p = parse_pair(&["U= V=S1,S2,S3".into()]).unwrap();
    assert!(p.u.is_empty());
    assert!(parse_pair(&["W=S1".into(), "V=S2".into()]).is_err());
}
