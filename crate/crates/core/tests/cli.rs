use std::fs;

use malcev_lab::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("malcev").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden(name: &str) -> String {
    fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn classify_prints_the_label() {
    let (code, out, _) = call(&["classify", "Z3"]);
    assert_eq!((code, out.trim()), (0, "Z3"));
    let (code, out, _) = call(&["--format", "structured", "classify", "M1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["label"], "M1");
}

#[test]
fn out_of_scope_and_usage_exit_codes() {
    assert_eq!(call(&["classify", "B2"]).0, 4);
    assert_eq!(call(&["bogus"]).0, 2);
    let (code, _, err) = call(&["classify", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
    assert_eq!(call(&["congruences", "fk:x"]).0, 2);
    assert_eq!(call(&["commutator", "--malcev", "d2", "--alpha", "0|12", "d2"]).0, 2);
}

#[test]
fn refuted_condition_still_succeeds() {
    let (code, out, _) = call(&["check-condition", "M0", "sigma2"]);
    assert_eq!(code, 0);
    assert!(out.contains("refuted"));
}

#[test]
fn condition_and_structure_files() {
    let dir = tempfile::tempdir().unwrap();
    let cond = dir.path().join("m.txt");
    fs::write(&cond, "m(x,x,y) = y\nm(y,x,x) = y\n").unwrap();
    let (code, out, _) = call(&["check-condition", "C2", cond.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("m: satisfied"));

    let s = dir.path().join("m0.txt");
    fs::write(&s, golden("catalog_M0.txt")).unwrap();
    let (code, out, _) = call(&["classify", s.to_str().unwrap()]);
    assert_eq!((code, out.trim()), (0, "M0"));

    fs::write(&s, "{ not a structure").unwrap();
    assert_eq!(call(&["classify", s.to_str().unwrap()]).0, 2);
}

#[test]
fn catalog_matches_golden_files() {
    assert_eq!(call(&["catalog", "M0"]).1, golden("catalog_M0.txt"));
    assert_eq!(call(&["catalog", "list"]).1, golden("catalog_list.txt"));
}

#[test]
fn output_is_deterministic() {
    for args in [&["ppdef", "M1", "U01"][..], &["congruences", "d2"], &["critical", "mu2", "d2"], &["catalog", "dump"]] {
        assert_eq!(call(args), call(args), "{args:?}");
    }
}

#[test]
fn out_option_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.txt");
    let (code, out, _) = call(&["--out", p.to_str().unwrap(), "congruences", "affine3"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(fs::read_to_string(&p).unwrap(), call(&["congruences", "affine3"]).1);
}

#[test]
fn subcommand_reports() {
    let (code, out, _) = call(&["ppdef", "M1", "U01"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("U01: definable"));
    let (code, out, _) = call(&["ppdef", "Z3", "mu2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("mu2: not-definable"), "{out}");
    let (_, out, _) = call(&["critical", "mu2", "d2"]);
    assert!(out.contains("critical: true"));
    let (_, out, _) = call(&["commutator", "--malcev", "d2", "--alpha", "01|2", "d2"]);
    assert!(out.contains("alpha abelian: true") && out.contains("algebra abelian: false"));
    let (code, out, _) = call(&["pp-verify", "--zp", "2", "--arity", "2"]);
    assert_eq!(code, 0, "{out}");
}
