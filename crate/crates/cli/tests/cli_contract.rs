mod common;

use common::{check_goldens, matrix_entries, pwcalc, pwcalc_env, subcommands, CASES};
use serde_json::Value;

fn close(v: &Value, expect: &[f64], eps: f64) {
    let got = matrix_entries(v);
    assert_eq!(got.len(), expect.len());
    for ((re, im), e) in got.iter().zip(expect) {
        assert!((re - e).abs() < eps && im.abs() < eps, "{re} + {im}i vs {e}");
    }
}

#[test]
fn goldens_match() {
    let problems = check_goldens();
    assert!(problems.is_empty(), "{}", problems.join("\n"));
}

#[test]
fn every_subcommand_has_a_golden_case() {
    for op in subcommands() {
        assert!(CASES.iter().any(|(_, args, code)| args[0] == op && *code == 0), "{op}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    for (name, args, _) in CASES {
        assert_eq!(pwcalc(args).stdout, pwcalc(args).stdout, "{name}");
    }
}

#[test]
fn commuting_decomposition() {
    let out = pwcalc(&["lebesgue", "--a", "diag_a.json", "--b", "diag_b.json"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.json["status"], "ok");
    close(&out.json["outputs"]["Bc"], &[5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-12);
    close(&out.json["outputs"]["Bs"], &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0], 1e-12);
}

#[test]
fn extended_value_exit() {
    let out = pwcalc(&["eval", "--phi", "entropy", "--a", "one.json", "--b", "zero.json"]);
    assert_eq!(out.code, 4);
    assert_eq!(out.json["status"], "error");
    let msg = out.json["diagnostics"]["error"].as_str().unwrap();
    assert!(msg.starts_with("extended value; use pair/trace"), "{msg}");
    let out = pwcalc(&["pair", "--phi", "entropy", "--a", "one.json", "--b", "zero.json", "--rho", "one.json"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.json["outputs"]["value"], "+inf");
}

#[test]
fn ando_pair_is_singular() {
    let out = pwcalc(&["singular", "--a", "ando_a.json", "--b", "ando_b.json"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.json["outputs"]["singular"], true);
    let out = pwcalc(&["lebesgue", "--a", "ando_a.json", "--b", "ando_b.json"]);
    close(&out.json["outputs"]["Bc"], &[0.0; 4], 1e-10);
    close(&out.json["outputs"]["P"], &[0.5, -0.5, -0.5, 0.5], 1e-10);
}

#[test]
fn exit_codes() {
    for (name, args, code) in CASES {
        let out = pwcalc(args);
        assert_eq!(out.code, *code, "{name}");
        let status = out.json["status"].as_str().unwrap();
        if *code == 0 {
            assert_ne!(status, "error", "{name}");
        } else {
            assert_eq!(status, "error", "{name}");
            assert!(out.json["diagnostics"]["error"].is_string(), "{name}");
        }
    }
}

#[test]
fn report_keys_are_fixed() {
    let out = pwcalc(&["rep", "--a", "pd_a.json", "--b", "pd_b.json"]);
    let top: Vec<&str> = out.stdout.lines().filter(|l| l.starts_with("  \"")).collect();
    let keys: Vec<&str> = top.iter().map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    assert_eq!(keys, ["operation", "inputs", "config", "outputs", "diagnostics", "status"]);
}

#[test]
fn environment_and_flag_precedence() {
    let base = ["singular", "--a", "ando_a.json", "--b", "ando_b.json"];
    let zero = |o: &common::Outcome| o.json["config"]["zero_tol"].as_f64().unwrap();
    assert_eq!(zero(&pwcalc(&base)), 1e-8);
    assert_eq!(zero(&pwcalc_env(&base, Some("1e-6"))), 1e-6);
    let mut flagged = base.to_vec();
    flagged.extend(["--tol-zero", "1e-5"]);
    assert_eq!(zero(&pwcalc_env(&flagged, Some("1e-6"))), 1e-5);
    assert_eq!(pwcalc_env(&base, Some("tiny")).code, 2);
    assert_eq!(pwcalc(&["singular", "--a", "ando_a.json", "--b", "ando_b.json", "--tol-zero", "-1"]).code, 2);
}

#[test]
fn output_matrices_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = pwcalc(&["eval", "--phi", "geom:0.3", "--a", "pd_a.json", "--b", "pd_b.json"]);
    let f = &out.json["outputs"]["F"];
    let path = dir.path().join("f.json");
    std::fs::write(&path, serde_json::to_string(f).unwrap()).unwrap();
    let again = pwcalc(&["rep", "--a", path.to_str().unwrap(), "--b", path.to_str().unwrap()]);
    assert_eq!(again.code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let back: Value = serde_json::from_str(&text).unwrap();
    for ((r0, i0), (r1, i1)) in matrix_entries(f).iter().zip(matrix_entries(&back)) {
        assert_eq!(r0.to_bits(), r1.to_bits());
        assert_eq!(i0.to_bits(), i1.to_bits());
    }
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = pwcalc(&["psum", "--a", "pd_a.json", "--b", "pd_b.json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), out.stdout);
    let bad = dir.path().join("missing/dir/report.json");
    let out = pwcalc(&["psum", "--a", "pd_a.json", "--b", "pd_b.json", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
}

#[test]
fn warnings_name_tolerance_and_margin() {
    let out = pwcalc(&["psum-limit", "--a", "diag_a.json", "--b", "diag_b.json", "--max-doublings", "3"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.json["status"], "warning");
    let w = out.json["diagnostics"]["warnings"][0].as_str().unwrap();
    assert!(w.contains("conv_tol") && w.contains("gap"), "{w}");
}
