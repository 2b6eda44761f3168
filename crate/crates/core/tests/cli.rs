use origami_spectrum::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("origami-spectrum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn orbit_text_and_json() {
    let (code, out, _) = call(&["orbit"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("36 vertices / 8 cusps"));
    assert!(out.contains("[7, 7, 7, 5, 3, 3, 3, 1]"));

    let (code, out, _) = call(&["orbit", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object());

    let (code, out, _) = call(&["orbit", "--dot"]);
    assert_eq!(code, 0);
    assert!(out.trim_start().starts_with("digraph"));
}

#[test]
fn lagrange_json_schema() {
    let (code, out, err) = call(&["--format", "json", "lagrange", "[;(1,3)]"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let v = if v.is_array() { v[0].clone() } else { v };
    assert_eq!(v["value_surd"], "7*sqrt(21)/3");
    assert_eq!(v["start_id"], 27);
    assert!(v["value_decimal"]
        .as_str()
        .unwrap()
        .starts_with("10.692677"));
    for key in ["alpha", "witnesses"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let w = &v["witnesses"][0];
    for key in ["n", "i", "vertex", "D", "m2"] {
        assert!(w.get(key).is_some(), "witness missing {key}");
    }
}

#[test]
fn lagrange_accepts_surd_and_torus() {
    let (code, out, _) = call(&["lagrange", "(-3+sqrt(21))/2", "--torus"]);
    assert_eq!(code, 0);
    assert!(out.contains("sqrt(21) = 4.582576"));
    let (code, _, err) = call(&["lagrange", "1/2"]);
    assert_eq!(code, 1);
    assert!(err.contains("irrational"));
}

#[test]
fn gaps_csv() {
    let (code, out, _) = call(&["gaps", "--k-max", "2", "--n-max", "1"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,n,left_surd,right_surd,left_dec,right_dec"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3 + 2);
    assert!(rows[0].starts_with("0,,7*sqrt(21)/3,7+sqrt(21),"));
}

#[test]
fn lsigma_and_limits() {
    let (code, out, _) = call(&["lsigma", "ab"]);
    assert_eq!(code, 0);
    assert!(out.contains("sqrt(4830)/6"));
    assert!(out.contains("kappa = 1"));
    let (code, out, _) = call(&["lsigma", "a", "--limit"]);
    assert_eq!(code, 0);
    assert!(out.contains("7+sqrt(21)"));
    let (code, _, err) = call(&["lsigma", "b"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn scan_reports_minimum_first() {
    let (code, out, _) = call(&["scan", "--max-sum", "8"]);
    assert_eq!(code, 0);
    assert!(out.lines().next().unwrap().starts_with("10.692677"));
}

#[test]
fn verify_items_and_exit_codes() {
    let (code, out, _) = call(&["verify", "--item", "tables"]);
    assert_eq!(code, 0);
    assert!(out.contains("2 checks, 0 failed"));
    let (code, _, err) = call(&["verify", "--item", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown verify item"));
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, 1);
    assert_eq!(call(&["frobnicate"]).0, 1);
    assert_eq!(call(&["--digits", "0", "orbit"]).0, 1);
    assert_eq!(call(&["--format", "csv", "lsigma", "ab"]).0, 1);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("lagrange"));
}
