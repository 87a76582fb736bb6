use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pplab::formats::{builtin, parse_digraph, parse_table, write_cnf, write_text};
use pplab_core::digraph::{make_family, Family};
use pplab_core::enumerate::is_isomorphic;
use pplab_core::exponential::exponential;
use pplab_core::gadgets::{brute_force_1in3, OneInThreeInstance};
use pplab_core::hom::core;
use pplab_core::rng::stream;

fn pplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pplab")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    pplab(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = pplab(args);
    assert!(out.status.code().unwrap() <= 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["hom", "@C6", "@C3"]), 0);
    assert_eq!(code(&["hom", "@C4", "@C3"]), 1);
    assert_eq!(code(&["hom", "@TT3", "@TC4", "--induced-check"]), 0);
    assert_eq!(code(&["hom", "@P3", "@TT3", "--induced-check"]), 1);
    assert_eq!(code(&["rcsp", "@C3", "@TT2", "@C3"]), 3);
    assert_eq!(code(&["rcsp", "@K3", "@C3", "@C6", "--route", "exp"]), 0);
    assert_eq!(code(&["solve", "--algo", "c3p-p3", "@P3"]), 3);
    assert_eq!(code(&["solve", "--algo", "levels", "--n", "3", "@P3"]), 0);
    assert_eq!(code(&["solve", "--algo", "nope", "@P3"]), 2);
    assert_eq!(code(&["hom", "@C6", "@C3", "--no-such-flag"]), 2);
    assert_eq!(code(&["hom", "missing-file.dg", "@C3"]), 2);
    assert_eq!(code(&["hom", "@K4", "@K4", "@K4"]), 2);
}

#[test]
fn exhaustive_search_reports_no_counterexample() {
    let out = pplab(&["obstructions", "search", "--checker", "tcn", "--n", "4", "--max", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    assert_eq!(v["coverage"].as_array().unwrap().len(), 5);
}

#[test]
fn emitted_digraphs_reparse() {
    let e = parse_digraph(&stdout(&["exp", "@C3", "@K2"])).unwrap();
    let c3 = make_family(Family::DirectedCycle(3)).unwrap();
    let k2 = make_family(Family::Complete(2)).unwrap();
    assert_eq!(e.digraph, exponential(&c3, &k2).unwrap());
    let j = parse_digraph(&stdout(&["exp", "@C3", "@K2", "--format", "json"])).unwrap();
    assert_eq!(j, e);
    let gu = parse_digraph(&stdout(&["core", "@GU"])).unwrap();
    assert_eq!(gu, builtin("GU").unwrap());
    let dir = tempfile::tempdir().unwrap();
    let d = make_family(Family::DirectedCycle(6)).unwrap().disjoint_union(&c3);
    let path = write(dir.path(), "d.dg", &write_text(&d, &[]));
    let c = parse_digraph(&stdout(&["core", &path])).unwrap();
    assert_eq!(c.digraph, core(&d).unwrap().core);
    assert!(stdout(&["product", "@C3", "@TT2", "--format", "dot"]).starts_with("digraph G {"));
}

#[test]
fn pp_constructions_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let def = write(dir.path(), "walk3.pp", "# walks of length three\ndef E(x, y) := exists z1, z2 . E(x, z1) & E(z1, z2) & E(z2, y)\n");
    let c5 = write(
        dir.path(),
        "c5.dg",
        "n 5\ne 0 1\ne 1 0\ne 1 2\ne 2 1\ne 2 3\ne 3 2\ne 3 4\ne 4 3\ne 4 0\ne 0 4\n",
    );
    let k5 = parse_digraph(&stdout(&["pp-power", &def, &c5])).unwrap().digraph;
    assert!(is_isomorphic(&k5, &make_family(Family::Complete(5)).unwrap()));
    let c6 = parse_digraph(&stdout(&["gadget-replace", &def, "@K2"])).unwrap().digraph;
    assert!(is_isomorphic(&c6, &make_family(Family::DirectedCycle(6)).unwrap()));
    let bad = write(dir.path(), "bad.pp", "def E(x, y, z) := E(x, y)\n");
    assert_eq!(code(&["pp-power", &bad, &c5]), 2);
}

#[test]
fn found_tables_verify() {
    let dir = tempfile::tempdir().unwrap();
    let table = stdout(&["poly", "find", "@TT3"]);
    let f = parse_table(&table).unwrap();
    assert_eq!((f.arity, f.domain), (4, 3));
    let path = write(dir.path(), "f.tbl", &table);
    assert_eq!(code(&["poly", "verify", "@TT3", &path, "--identity", "siggers"]), 0);
    assert_eq!(code(&["poly", "verify", "@C3", &path]), 1);
    assert_eq!(code(&["poly", "find", "@K3"]), 1);
    let majority = stdout(&["poly", "find", "@GU", "--identity", "majority", "--conservative"]);
    let path = write(dir.path(), "m.tbl", &majority);
    assert_eq!(code(&["poly", "verify", "@GU", &path, "--identity", "majority", "--conservative"]), 0);
}

#[test]
fn reductions_agree_with_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = stream(61, "cli-reduce");
    for k in 0..12 {
        let inst = OneInThreeInstance::random(4 + k % 3, 2 + k % 3, &mut rng).unwrap();
        let cnf = write(dir.path(), "i.cnf", &write_cnf(&inst));
        let sat = brute_force_1in3(&inst).unwrap();
        for (target, template) in [("c3plus", "@C3plus"), ("tcn", "@TC4"), ("c3pp", "@C3plusplus")] {
            let out = write(dir.path(), "r.dg", &stdout(&["reduce", "--target", target, "--spacing", "1", &cnf]));
            assert_eq!(code(&["hom", &out, template]), if sat { 0 } else { 1 });
        }
    }
    let cnf = write(dir.path(), "x.cnf", "p 1in3 3 1\n1 2 3\n");
    assert_eq!(code(&["reduce", "--target", "c3plus", "--mode", "identify", "--spacing", "2", &cnf]), 2);
    let out = write(dir.path(), "r.dg", &stdout(&["reduce", "--target", "c3plus", &cnf]));
    assert_eq!(code(&["audit", "--profile", "c3plus_p4free", &out]), 0);
}

#[test]
fn json_reports_are_byte_identical() {
    let args = ["obstructions", "search", "--checker", "tcn", "--n", "5", "--max", "6", "--sample", "200", "--seed", "7", "--format", "json"];
    let a = pplab(&args);
    let b = pplab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let sweep = |jobs: &str| pplab(&["sweep", "--algo", "tcn-p3", "--n", "4", "--count", "1500", "--jobs", jobs, "--format", "json"]).stdout;
    let one = sweep("1");
    assert_eq!(one, sweep("3"));
    let v: serde_json::Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(v["checked"], 1500);
    assert_eq!(v["mismatch"], serde_json::Value::Null);
}
