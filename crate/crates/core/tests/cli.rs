use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hazard(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hazard")).args(args).current_dir(dir).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("and.txt"), "n=2\nbits=0001\n").unwrap();
    std::fs::write(dir.path().join("xor.txt"), "# parity\nn=2\nbits=0110\n").unwrap();
    std::fs::write(dir.path().join("bad.txt"), "n=2\nbits=01\n").unwrap();
    dir
}

#[test]
fn check_mux_formula_lists_hazard() {
    let dir = setup();
    let out = hazard(&["check", "(or (and (not x1) x2) (and x1 x3))", "--arity", "3"], dir.path());
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["hazard_free"], false);
    assert_eq!(v["witnesses"], serde_json::json!(["u11"]));
}

#[test]
fn kw_on_and() {
    let dir = setup();
    let out = hazard(&["kw", "and.txt", "--exact", "--tree"], dir.path());
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["protocol"]["leaves"], 2);
    assert_eq!(v["protocol"]["tree"]["kind"], "split");
}

#[test]
fn synthesize_cover_writes_formula() {
    let dir = setup();
    let out =
        hazard(&["synthesize", "xor.txt", "--method", "cover", "--base", "00,11", "--out", "xor.sexp"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("xor.sexp")).unwrap();
    assert_eq!(text.trim(), "(and (or x1 x2) (or (not x1) (not x2)))");
    let v = json(&out);
    assert_eq!(v["size"], 4);
    assert_eq!(v["hazard_report"]["hazard_free"], true);

    let out = hazard(&["synthesize", "xor.txt", "--method", "mux"], dir.path());
    assert!(out.status.success());
    assert_eq!(json(&out)["hazard_report"]["hazard_free"], true);
}

#[test]
fn analyze_and_compose() {
    let dir = setup();
    let v = json(&hazard(&["analyze", "xor.txt"], dir.path()));
    assert_eq!(v["unate"], false);
    assert_eq!(v["monogap"]["gap"], 2.0);
    let v = json(&hazard(&["compose", "and.txt", "xor.txt", "--verify"], dir.path()));
    assert_eq!(v["composition_primes_match"], true);
    assert_eq!(v["reduction"]["failures"], 0);
}

#[test]
fn study_output_is_deterministic_and_written_to_file() {
    let dir = setup();
    let args = ["study", "random-derivative", "--n", "6", "--trials", "10", "--x-samples", "4", "--seed", "3"];
    let a = hazard(&[&args[..], &["--out", "a.json", "--jobs", "1"]].concat(), dir.path());
    let b = hazard(&[&args[..], &["--out", "b.json", "--jobs", "4"]].concat(), dir.path());
    assert!(a.status.success() && b.status.success());
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
}

#[test]
fn exit_codes() {
    let dir = setup();
    assert_eq!(hazard(&["nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(hazard(&["kw", "and.txt", "--bogus"], dir.path()).status.code(), Some(2));

    let out = hazard(&["analyze", "bad.txt"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["exit_code"], 3);

    assert_eq!(hazard(&["check", "(and x1 x4)", "--arity", "2"], dir.path()).status.code(), Some(3));
    let out = hazard(&["kw", "xor.txt", "--exact", "--label-limit", "3", "--out", "kw.json"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    assert!(!dir.path().join("kw.json").exists());
}
