use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn program(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../programs")
        .join(name)
        .display()
        .to_string()
}

fn flux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flux"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    flux(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(flux(args).stdout)
        .unwrap()
        .trim()
        .to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_slice(&flux(&all).stdout).unwrap()
}

fn scratch(name: &str, src: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, src).unwrap();
    path.display().to_string()
}

#[test]
fn subtype_exit_codes() {
    assert_eq!(code(&["subtype", "b[]*,c[]?", "(b[]|c[])*"]), 0);
    assert_eq!(code(&["subtype", "a[],a[]", "a[]"]), 1);
    assert_eq!(code(&["subtype", "a[", "a[]"]), 2);
    let out = stdout(&["subtype", "a[],a[]", "a[]"]);
    assert!(out.starts_with("false"), "{out}");
}

#[test]
fn subtype_with_signature_file() {
    let sig = scratch(
        "tree.types",
        "type Tree = tree[leaf[string] | node[Tree*]];",
    );
    assert_eq!(
        code(&[
            "subtype",
            "--sig",
            &sig,
            "tree[leaf[string]|node[Tree*]]",
            "Tree"
        ]),
        0
    );
    assert_eq!(
        code(&["subtype", "--sig", &sig, "Tree", "tree[leaf[string]]"]),
        1
    );
    let bad = scratch("bad.types", "type X = () | a[], X;");
    assert_eq!(code(&["subtype", "--sig", &bad, "X", "X"]), 2);
}

#[test]
fn bundled_programs_check() {
    for name in [
        "leaves.muxq",
        "flagship.muxq",
        "insert_after.flux",
        "leafupd.flux",
    ] {
        assert_eq!(code(&["check", &program(name)]), 0, "{name}");
    }
    assert_eq!(stdout(&["type", &program("flagship.muxq")]), "b[]*,c[]?");
    assert_eq!(
        stdout(&["type", &program("insert_after.flux")]),
        "a[(b[],c[])*,c[]],d[]"
    );
}

#[test]
fn ill_typed_and_unparsable_programs() {
    let ill = scratch(
        "ill.muxq",
        "declare function f() : string { true };\nquery () : ()",
    );
    assert_eq!(code(&["check", &ill]), 1);
    let report = json(&["check", &ill]);
    assert_eq!(report["status"], "error");
    assert_eq!(report["diagnostics"][0]["rule"], "q-ascription");
    assert_eq!(report["diagnostics"][0]["span"]["start_line"], 1);

    let bad = scratch("bad.muxq", "query (");
    assert_eq!(code(&["check", &bad]), 2);
    assert_eq!(json(&["check", &bad])["diagnostics"][0]["rule"], "syntax");
    assert_eq!(code(&["check", "/no/such/file.muxq"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn report_schema() {
    let report = json(&["check", &program("leaves.muxq")]);
    let obj = report.as_object().unwrap();
    for key in ["status", "type", "diagnostics"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert_eq!(report["status"], "ok");
    assert_eq!(report["type"], "leaf[string]*");
    assert_eq!(report["diagnostics"], Value::Array(Vec::new()));

    let ill = scratch("schema.muxq", "declare variable $x : a[];\nquery $x : b[]");
    let d = &json(&["check", &ill])["diagnostics"][0];
    for key in ["severity", "message", "rule", "span"] {
        assert!(d.get(key).is_some(), "diagnostic missing {key}");
    }
    assert_eq!(d["severity"], "error");
}

#[test]
fn eval_queries() {
    let leaves = program("leaves.muxq");
    let t = "t=tree[node[tree[leaf[\"u\"]],tree[leaf[\"v\"]]]]";
    assert_eq!(
        stdout(&["eval", &leaves, "--env", t]),
        "leaf[\"u\"],leaf[\"v\"]"
    );
    assert_eq!(
        json(&["eval", &leaves, "--env", t])["value"],
        "leaf[\"u\"],leaf[\"v\"]"
    );
    // Missing binding, undeclared variable, and a value outside the type.
    assert_eq!(code(&["eval", &leaves]), 2);
    assert_eq!(code(&["eval", &leaves, "--env", "y=a[]"]), 2);
    let bad = json(&["eval", &leaves, "--env", "t=leaf[\"u\"]"]);
    assert_eq!(bad["status"], "error");
    assert_eq!(bad["diagnostics"][0]["rule"], "runtime");
    assert_eq!(code(&["eval", &leaves, "--env", "t=leaf[\"u\"]"]), 1);
    assert_eq!(code(&["eval", &program("leafupd.flux")]), 2);
}

#[test]
fn run_updates() {
    let insert_after = program("insert_after.flux");
    assert_eq!(
        stdout(&["run-update", &insert_after, "--input", "a[b[],b[],c[]],d[]"]),
        "a[b[],c[],b[],c[],c[]],d[]"
    );
    assert_eq!(code(&["run-update", &insert_after, "--input", "d[]"]), 1);
    let leafupd = program("leafupd.flux");
    assert_eq!(
        stdout(&[
            "run-update",
            &leafupd,
            "--input",
            "tree[node[tree[leaf[\"u\"]],tree[leaf[\"v\"]]]]"
        ]),
        "tree[node[tree[leaf[\"z\"]],tree[leaf[\"z\"]]]]"
    );
}

#[test]
fn recursion_limit_is_a_runtime_error() {
    let src = "declare function f($x : a[]*) : a[]* { f($x) };\ndeclare variable $y : a[]*;\nquery f($y) : a[]*";
    let p = scratch("loop.muxq", src);
    assert_eq!(code(&["check", &p]), 0);
    let r = json(&["--recursion-limit", "16", "eval", &p, "--env", "y=a[]"]);
    assert_eq!(r["diagnostics"][0]["rule"], "runtime");
    assert_eq!(
        code(&["--recursion-limit", "16", "eval", &p, "--env", "y=a[]"]),
        1
    );
}

#[test]
fn oracle_subcommand() {
    let r = json(&["oracle", &program("leaves.muxq"), "--cases", "50"]);
    assert_eq!(r["status"], "ok");
    let suites = r["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 3);
    assert!(suites.iter().all(|s| s["failures"] == 0));
    assert_eq!(
        code(&["oracle", &program("leafupd.flux"), "--max-depth", "4"]),
        0
    );
    let with_all = json(&[
        "oracle",
        &program("flagship.muxq"),
        "--suites",
        "--cases",
        "20",
    ]);
    assert!(with_all["suites"].as_array().unwrap().len() > 3);
    assert_eq!(with_all["status"], "ok");
}
