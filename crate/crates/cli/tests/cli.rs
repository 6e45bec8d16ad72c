use std::path::PathBuf;
use std::process::{Command, Output};

fn kaleido(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kaleido")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture() -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", "three.bvw"].iter().collect();
    p.display().to_string()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = kaleido(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn eval_trivial_identity() {
    let out = kaleido(&["eval", "-a", "B0", "name({}) = name({})"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\nmodels: true\n");
}

#[test]
fn eval_reports_partial_values() {
    let v = json(&["eval", "u in xi"]);
    assert_eq!(v["value"], "{a}");
    assert_eq!(v["models"], false);
    let w = fixture();
    let v = json(&["eval", "-w", &w, "-a", "T", "s = t"]);
    assert_eq!(v["value"], "0");
    let v = json(&["eval", "-w", &w, "-a", "T", "name({}) in s"]);
    assert_eq!(v["atoms"], serde_json::json!(["p", "q"]));
}

#[test]
fn laws_on_b0() {
    let out = kaleido(&["laws", "-a", "B0", "--rank", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "reflexivity 4/4, symmetry 16/16, transitivity 64/64, substitution 64/64 pass\n");
    let seq = kaleido(&["laws", "-a", "B0", "--rank", "2", "--sequential"]);
    assert_eq!(stdout(&seq), stdout(&out));
    let v = json(&["laws", "-w", &fixture(), "-a", "T", "--rank", "2"]);
    assert_eq!(v["sets"], 8);
    assert_eq!(v["transitivity"]["total"], 512);
    assert_eq!(v["pass"], true);
}

#[test]
fn enumerate_lists_and_respects_budget() {
    let v = json(&["enumerate", "-a", "B0", "--rank", "3"]);
    assert_eq!(v["count"], 256);
    let out = kaleido(&["enumerate", "-a", "B0", "--rank", "3", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn restriction_and_star() {
    let out = kaleido(&["restrict", "u", "--at", "a"]);
    assert_eq!(stdout(&out), "name({{}})\nover atoms: a\n");
    let shallow = json(&["restrict", "u", "--at", "a", "--shallow"]);
    assert_eq!(shallow["set"], "bv { name({}): {a} }");
    assert_eq!(shallow["atoms"], serde_json::json!(["a", "b"]));
    let v = json(&["star", "u"]);
    let rows = v["profile"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["situation"], "1");
}

#[test]
fn mix_agrees_with_pieces() {
    let w = fixture();
    let v = json(&["mix", "-w", &w, "-a", "T", "--part", "pq", "--part", "r", "--piece", "s", "--piece", "t"]);
    assert_eq!(v["mix"], "name({{}})");
    let out = kaleido(&["mix", "-w", &w, "-a", "T", "--part", "p", "--part", "q", "--piece", "s", "--piece", "t"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("partition"));
}

#[test]
fn quotient_of_canonical_names() {
    let v = json(&["quotient", "--atom", "a", "--set", "name({})", "--set", "name({{}})", "--set", "u"]);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    assert_eq!(v["class_of"], serde_json::json!([0, 1, 1]));
    assert_eq!(v["well_defined"], true);
    let out = kaleido(&["quotient", "--atom", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kaleidoscopic_report() {
    let w = fixture();
    let v = json(&["kaleido", "-w", &w, "-f", "pair", "forall x in name({{}}): x = name({})"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["members"][0]["member"], "U");
    let out = kaleido(&["kaleido", "-f", "chain", "exists x: rank 2: ~(x = name({})) & ~(x = name({{}}))"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("chain: does not hold\n"));
}

#[test]
fn scott_commands() {
    let out = kaleido(&["scott", "compare", "xi", "eta"]);
    assert_eq!(stdout(&out), "{w1}\nmeasure: 1/2\n");
    let w = fixture();
    let v = json(&["scott", "-w", &w, "-s", "dice", "compare", "x", "y"]);
    assert_eq!(v["atoms"], serde_json::json!(["d1", "d3"]));
    assert_eq!(v["measure"], "2/3");
    let v = json(&["scott", "-w", &w, "-s", "dice", "leq-const", "x", "-1/2"]);
    assert_eq!(v["value"], "0");
    let v = json(&["scott", "-w", &w, "-s", "dice", "measure", "d2", "d4"]);
    assert_eq!(v["measure"], "1/3");
    let v = json(&["scott", "-w", &w, "-s", "dice", "show"]);
    assert_eq!(v["atoms"], serde_json::json!(["d1", "d2", "d3"]));
}

#[test]
fn demo_reports_both_values() {
    let out = kaleido(&["demo", "paper-example"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[[xi = eta]]  evaluator: 0  oracle: 0"));
    assert!(text.contains("asserted in the source text: 1"));
    assert!(text.contains("[[xi = eta']] evaluator: 1  oracle: 1"));
    let v = json(&["demo", "paper-example"]);
    assert_eq!(v["xi_eq_eta_adjusted"]["oracle"], "1");
    assert_eq!(v["agree"], true);
}

#[test]
fn errors_and_exit_codes() {
    let out = kaleido(&["eval", "forall x: x = x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:11"));
    assert_eq!(kaleido(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kaleido(&["eval"]).status.code(), Some(2));
    let out = kaleido(&["eval", "-w", "/nonexistent.bvw", "x = x"]);
    assert_eq!(out.status.code(), Some(1));
    let out = kaleido(&["eval", "-a", "Nope", "x = x"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Nope"));
}

#[test]
fn output_is_deterministic() {
    let a = kaleido(&["--json", "enumerate", "-a", "B3", "--rank", "2"]);
    let b = kaleido(&["--json", "enumerate", "-a", "B3", "--rank", "2"]);
    assert_eq!(a.stdout, b.stdout);
}
