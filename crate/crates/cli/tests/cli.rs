use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn gpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = gpc(&all);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)))
}

#[test]
fn count_table1() {
    let o = gpc(&["count", &example("table1.poset")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "42\n");
    let v = json(&["count", &example("table1.poset")]);
    assert_eq!(v["result"]["extensions"], "42");
    assert_eq!(v["input"]["elements"], 6);
}

#[test]
fn delta_examples() {
    assert!(stdout(&gpc(&["delta", &example("p163425.poset")])).starts_with("7/15\t"));
    assert!(stdout(&gpc(&["delta", &example("p15324.poset")])).starts_with("1/2\t"));
    assert_eq!(
        json(&["delta", &example("p163425.poset")])["result"]["value"],
        "7/15"
    );
}

#[test]
fn enum_lists_every_row() {
    let text = stdout(&gpc(&["enum", &example("table1.poset")]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 42);
    assert!(rows.contains(&"2 1 3 4 5 6"));
    assert!(rows.contains(&"5 3 4 1 6 2"));
    let o = gpc(&["--cap", "10", "enum", &example("table1.poset")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn probs_are_exact_with_decimals() {
    let text = stdout(&gpc(&["probs", &example("table1.poset")]));
    assert!(text.starts_with("x\ty\tprob\tdecimal\n"));
    assert!(text.contains("0\t1\t1/3\t0.333333\n"));
    assert!(text.contains("1\t0\t2/3\t0.666667\n"));
}

#[test]
fn one_third_check() {
    let o = gpc(&["check-13-23", &example("table1.poset")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1/3"));
}

#[test]
fn gpc_default_strict_and_nonadaptive() {
    let o = gpc(&["check-gpc", &example("p312.poset")]);
    assert_eq!(o.status.code(), Some(0));
    let o = gpc(&["check-gpc", "--strict", &example("p312.poset")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAILURE"));
    let o = gpc(&["check-gpc", "--nonadaptive", &example("n.poset")]);
    assert_eq!(o.status.code(), Some(0));
    let o = gpc(&["check-gpc", "--chain-t2-one", &example("n.poset")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn gpc_on_a_chain_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.poset");
    std::fs::write(&path, "n 3\nrel 0 1\nrel 1 2\n").unwrap();
    let o = gpc(&["check-gpc", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn via_decomposition_on_example3() {
    let v = json(&[
        "check-gpc",
        "--via-decomposition",
        &example("example3.poset"),
    ]);
    let lifted = &v["result"]["Lifted"];
    assert_eq!(
        lifted["steps"].as_array().unwrap().last().unwrap()["members"],
        serde_json::json!([3, 4, 5])
    );
    assert_eq!(lifted["innermost"]["t0"], "3");
    let o = gpc(&[
        "check-gpc",
        "--via-decomposition",
        &example("boolean3.poset"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("direct search"));
}

#[test]
fn sort_cost_and_gold_bound() {
    let text = stdout(&gpc(&["sort-cost", &example("n.poset")]));
    assert!(text.contains("sort cost:    3"));
    let o = gpc(&["gold-bound", &example("n.poset")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("true"));
}

#[test]
fn lexsum_and_compose_at_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sum.poset");
    let point = dir.path().join("point.poset");
    std::fs::write(&point, "n 1\n").unwrap();
    let p = point.to_str().unwrap();
    let o = gpc(&[
        "lexsum",
        &example("n.poset"),
        &example("r_tu.poset"),
        p,
        p,
        p,
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&gpc(&["count", out.to_str().unwrap()])), "42\n");

    let composed = stdout(&gpc(&[
        "compose-at",
        &example("n.poset"),
        "0",
        &example("r_tu.poset"),
    ]));
    assert_eq!(composed, std::fs::read_to_string(&out).unwrap());

    let o = gpc(&["lexsum", &example("n.poset"), p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn verify_locality_report() {
    let v = json(&["verify-locality", &example("table1.sum")]);
    let r = &v["result"];
    assert_eq!(r["columns"], 3);
    assert_eq!(r["k"], 14);
    assert_eq!(r["e"], "42");
    assert_eq!(r["divisible"], true);
    assert_eq!(r["reconstruction_ok"], true);
}

#[test]
fn lift_gpc_report() {
    let v = json(&["lift-gpc", &example("n.poset"), "0", &example("r_tu.poset")]);
    assert_eq!(v["result"]["lifted"]["k"], "14");
    assert_eq!(v["result"]["lifted"]["witness"]["t0"], "42");
    assert_eq!(v["result"]["factor_witness"]["t0"], "3");
}

#[test]
fn decompose_reports() {
    let v = json(&["decompose", &example("example3.poset")]);
    assert_eq!(v["result"]["indecomposable"], false);
    assert_eq!(v["result"]["members"], serde_json::json!([3, 4, 5]));
    assert_eq!(v["result"]["factor"]["n"], 3);
    let v = json(&["decompose", &example("boolean3.poset")]);
    assert_eq!(v["result"]["indecomposable"], true);
}

#[test]
fn dot_output() {
    let text = stdout(&gpc(&["dot", &example("n.poset")]));
    assert!(text.starts_with("digraph {"));
    assert!(text.contains("1 -> 3;"));
}

#[test]
fn sweep_small() {
    let o = gpc(&["sweep", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("total failures: gpc 0, 1/3-2/3 0, unbalanced first pair 0"));
    assert_eq!(gpc(&["sweep", "7"]).status.code(), Some(1));
    assert_eq!(gpc(&["sweep", "3", "--strict"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["--json", "check-gpc", &example("table1.poset")];
    assert_eq!(gpc(&args).stdout, gpc(&args).stdout);
    let args = ["--json", "sweep", "4"];
    assert_eq!(gpc(&args).stdout, gpc(&args).stdout);
    let timed = json(&["--timing", "count", &example("n.poset")]);
    assert!(timed["wall_ms"].is_number());
    assert!(json(&["count", &example("n.poset")])
        .get("wall_ms")
        .is_none());
}

#[test]
fn usage_and_io_errors_exit_one() {
    assert_eq!(gpc(&["count", "/no/such/file"]).status.code(), Some(1));
    assert_eq!(gpc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gpc(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poset");
    std::fs::write(&bad, "n 2\nrel 0 1\nrel 1 0\n").unwrap();
    let o = gpc(&["count", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
