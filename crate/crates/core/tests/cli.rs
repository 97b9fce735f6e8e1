use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_torushms"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("TORUSHMS_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args, None);
    let text = if out.stdout.is_empty() { &out.stderr } else { &out.stdout };
    (out.status.code().unwrap(), serde_json::from_slice(text).expect("valid JSON"))
}

#[test]
fn cf_counts_generators() {
    let (code, v) = json(&["--json", "cf", "--l0", "L(1,2;0)", "--l1", "L(1,0;0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
    assert_eq!(v["degree"], 0);
    assert_eq!(v["graded_dims"]["0"], 2);
}

#[test]
fn witness_is_nonzero() {
    let (code, v) = json(&["--json", "witness", "--x", "1/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["is_zero"], false);
    assert_eq!(v["cobordism_class"]["hom"], serde_json::json!([0, 0]));
}

#[test]
fn parallel_curves_are_a_domain_error() {
    let (code, v) = json(&["--json", "cf", "--l0", "L(1,0;0)", "--l1", "L(1,0;1/3)"]);
    assert_eq!(code, 2);
    assert_eq!(v["kind"], "NonTransverse");
}

#[test]
fn truncated_literal_is_a_parse_error() {
    let (code, v) = json(&["--json", "cf", "--l0", "L(1,0", "--l1", "L(1,0;0)"]);
    assert_eq!(code, 1);
    assert_eq!(v["kind"], "ParseError");
    assert_eq!(v["detail"]["column"], 6);
    assert_eq!(v["detail"]["input"], "L(1,0");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["cf", "--bogus"], None).status.code(), Some(1));
}

#[test]
fn unanchored_slope_is_a_domain_error() {
    let (code, v) = json(&["--json", "theta-sharp", "--brane", "L(2,1;0)"]);
    assert_eq!(code, 2);
    assert_eq!(v["kind"], "UnanchoredSlope");
}

#[test]
fn output_is_deterministic_across_runs_and_threads() {
    let cases: [&[&str]; 3] = [
        &["--json", "mu2", "--l0", "L(0,1;1/3)", "--l1", "L(1,2;0)", "--l2", "L(1,0;0)", "--triangles"],
        &["--json", "--cutoff", "5", "assoc", "--l0", "L(0,1;1/5)", "--l1", "L(1,3;0)", "--l2", "L(1,1;1/7)", "--l3", "L(1,0;2/9)"],
        &["--json", "relations", "--r-max", "2", "--d-max", "2", "--h-max", "2"],
    ];
    for args in cases {
        let base = run(args, Some("1"));
        assert_eq!(base.status.code(), Some(0), "{}", String::from_utf8_lossy(&base.stderr));
        for threads in [None, Some("1"), Some("4")] {
            let again = run(args, threads);
            assert_eq!(again.stdout, base.stdout, "{args:?} with {threads:?} threads");
        }
    }
}

#[test]
fn prec_rounds_printed_coefficients() {
    let args = |p: &'static str| ["--json", "--prec", p, "theta", "--kind", "0", "--point", "pt(x=1/3, phase=1/7)"];
    let (_, full) = json(&args("64"));
    let (_, short) = json(&args("8"));
    let a = full["value"]["terms"][1]["re"].as_f64().unwrap();
    let b = short["value"]["terms"][1]["re"].as_f64().unwrap();
    assert!(a != b && (a - b).abs() <= a.abs() * 2f64.powi(-8));
    // 8 significant bits: b scaled into [2^7, 2^8) is an integer
    let m = b.abs() * 2f64.powi(7 - b.abs().log2().floor() as i32);
    assert_eq!(m, m.round());
}
