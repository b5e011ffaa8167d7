use std::process::Command;

use kakeya::cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kakeya").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn verify_b0_over_f3() {
    let v = json(&["verify", "--p", "3", "--intercepts", "0,2,2,0"]);
    assert_eq!(v["cardinality"], 7);
    assert_eq!(v["excess"], 1);
    assert_eq!(v["lower_bound"], 6);
    assert_eq!(v["histogram"]["3"], 1);
    assert_eq!(v["triple_point_exceptions"].as_array().unwrap().len(), 1);
    for check in ["incidence_formula", "triple_point_lemma", "excess_at_least_q_over_3"] {
        assert_eq!(v["checks"][check], true, "{check}");
    }
}

#[test]
fn verify_rejects_bad_intercepts() {
    let (code, _, err) = invoke(&["verify", "--p", "3", "--intercepts", "0,2,2"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
    let (code, _, _) = invoke(&["verify", "--p", "3", "--intercepts", "0,x,2,0"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn b0_matches_expected_excess() {
    for (p, k, excess) in [("7", "1", 3), ("3", "2", 4), ("2", "3", 0)] {
        let v = json(&["b0", "--p", p, "--k", k]);
        assert_eq!(v["excess"], excess, "GF({p}^{k})");
        assert_eq!(v["expected_excess"], excess);
    }
}

#[test]
fn field_check_over_gf9() {
    let v = json(&["field-check", "--p", "3", "--k", "2"]);
    assert_eq!(v["q"], 9);
    assert_eq!(v["modulus"], serde_json::json!([1, 0, 1]));
}

#[test]
fn search_over_f5() {
    let v = json(&["search", "--p", "5", "--no-timing"]);
    assert_eq!(v["min_excess"], 2);
    assert_eq!(v["exhausted"], true);
    assert!(v.get("wall_ms").is_none());
    let witnesses = v["witnesses"].as_array().unwrap();
    assert!(witnesses.contains(&serde_json::json!([0, 4, 1, 1, 4, 0])));
}

#[test]
fn search_output_is_reproducible() {
    let args = ["search", "--p", "7", "--no-timing"];
    let (_, a, _) = invoke(&args);
    let (_, b, _) = invoke(&args);
    let (_, c, _) = invoke(&["search", "--p", "7", "--no-timing", "--workers", "4"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn budgeted_search_labels_itself() {
    let (code, out, _) = invoke(&[
        "--format", "text", "search", "--p", "13", "--node-budget", "50000", "--no-timing",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("NON-EXHAUSTIVE"), "{out}");
    let v = json(&["search", "--p", "13", "--node-budget", "50000", "--no-timing"]);
    assert_eq!(v["exhausted"], false);
}

#[test]
fn large_unbudgeted_search_is_refused() {
    let (code, _, err) = invoke(&["search", "--p", "2", "--k", "4"]);
    assert_eq!(code, EXIT_DOMAIN, "{err}");
}

#[test]
fn conjectures_at_q7() {
    let v = json(&["conjectures", "--p", "7"]);
    assert_eq!(v["conjecture1_holds"], true);
    assert_eq!(v["conjecture2_holds"], true);
    let (code, _, _) = invoke(&["conjectures", "--p", "11", "--node-budget", "1000"]);
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn moments_with_enumeration() {
    let v = json(&["moments", "--p", "3", "--enumerate"]);
    assert_eq!(v["mean"], "65/9");
    assert_eq!(v["variance"], "32/81");
    assert_eq!(v["closed_form_match"], true);
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--p", "5", "--n", "2000", "--seed", "7"];
    let (_, a, _) = invoke(&args);
    let (_, b, _) = invoke(&[&args[..], &["--workers", "3"]].concat());
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["n"], 2000);
    assert!(v["chebyshev_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn csv_histogram() {
    let (code, out, _) = invoke(&["--format", "csv", "verify", "--p", "3", "--intercepts", "0,2,2,0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "multiplicity,count\n1,3\n2,3\n3,1\n");
}

#[test]
fn domain_and_usage_errors() {
    assert_eq!(invoke(&["b0", "--p", "4"]).0, EXIT_DOMAIN);
    assert_eq!(invoke(&["b0", "--p", "2", "--k", "9"]).0, EXIT_DOMAIN);
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["b0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["sample", "--p", "3", "--n", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["search", "--p", "3", "--workers", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_round_trip() {
    let out = Command::new(env!("CARGO_BIN_EXE_kakeya"))
        .args(["verify", "--p", "3", "--intercepts", "0,2,2,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cardinality"], 7);

    let bad = Command::new(env!("CARGO_BIN_EXE_kakeya"))
        .args(["b0", "--p", "6"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_DOMAIN));
}
