#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub json: serde_json::Value,
}

/// Runs the binary inside the fixture directory with a clean tolerance env.
pub fn pwcalc(args: &[&str]) -> Outcome {
    pwcalc_env(args, None)
}

pub fn pwcalc_env(args: &[&str], tol_zero: Option<&str>) -> Outcome {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pwcalc"));
    cmd.current_dir(fixtures()).args(args).env_remove("PWCALC_TOL_ZERO");
    if let Some(v) = tol_zero {
        cmd.env("PWCALC_TOL_ZERO", v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 report");
    let json = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("report is not JSON ({e}):\n{stdout}"));
    Outcome { code: out.status.code().unwrap_or(-1), stdout, json }
}

/// Golden cases: name, argv, expected exit code.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("rep_diag", &["rep", "--a", "diag_a.json", "--b", "diag_b.json"], 0),
    ("rep_complex", &["rep", "--a", "pd_a.json", "--b", "pd_b.json"], 0),
    ("eval_geom", &["eval", "--phi", "geom:0.5", "--a", "pd_a.json", "--b", "pd_b.json"], 0),
    ("eval_power_alpha", &["eval", "--phi", "power", "--alpha", "2", "--a", "pd_a.json", "--b", "pd_b.json"], 0),
    ("eval_entropy_extended", &["eval", "--phi", "entropy", "--a", "one.json", "--b", "zero.json"], 4),
    ("lebesgue_diag", &["lebesgue", "--a", "diag_a.json", "--b", "diag_b.json"], 0),
    ("lebesgue_ando", &["lebesgue", "--a", "ando_a.json", "--b", "ando_b.json"], 0),
    ("psum_complex", &["psum", "--a", "pd_a.json", "--b", "pd_b.json"], 0),
    ("psum_limit_diag", &["psum-limit", "--a", "diag_a.json", "--b", "diag_b.json"], 0),
    ("psum_limit_ando", &["psum-limit", "--a", "ando_a.json", "--b", "ando_b.json", "--max-doublings", "8"], 0),
    ("singular_ando", &["singular", "--a", "ando_a.json", "--b", "ando_b.json"], 0),
    ("abscont_diag", &["abscont", "--a", "diag_a.json", "--b", "diag_b.json"], 0),
    ("rn_complex", &["rn", "--a", "pd_a.json", "--b", "pd_b.json"], 0),
    ("kubo_parallel", &["kubo", "--phi", "parallel", "--a", "pd_a.json", "--b", "pd_b.json"], 0),
    ("pair_entropy", &["pair", "--phi", "entropy", "--a", "one.json", "--b", "zero.json", "--rho", "one.json"], 0),
    ("pair_geom", &["pair", "--phi", "geom:0.3", "--a", "pd_a.json", "--b", "pd_b.json", "--rho", "rho.json"], 0),
    ("trace_power", &["trace", "--phi", "power:2", "--a", "pd_a.json", "--b", "pd_b.json"], 0),
    ("trace_entropy_ando", &["trace", "--phi", "entropy", "--a", "ando_a.json", "--b", "ando_b.json"], 0),
    (
        "tensor_check_power",
        &["tensor-check", "--phi", "power:2", "--a", "pd_a.json", "--b", "pd_b.json", "--a2", "pd_b.json", "--b2", "pd_a.json", "--rho", "rho.json"],
        0,
    ),
    (
        "tensor_check_entropy",
        &["tensor-check", "--phi", "entropy", "--a", "ando_a.json", "--b", "ando_b.json", "--a2", "pd_a.json", "--b2", "pd_b.json"],
        0,
    ),
    ("form_p_complex", &["form-p", "--a", "pd_a.json", "--b", "pd_b.json", "--xi", "xi.json"], 0),
    ("err_not_hermitian", &["rep", "--a", "not_hermitian.json", "--b", "diag_b.json"], 2),
    ("err_not_psd", &["rep", "--a", "not_psd.json", "--b", "pd_b.json"], 3),
    ("err_malformed", &["rep", "--a", "malformed.json", "--b", "pd_b.json"], 2),
    ("err_missing_phi", &["eval", "--a", "pd_a.json", "--b", "pd_b.json"], 2),
    ("err_rn_singular_a", &["rn", "--a", "ando_a.json", "--b", "ando_b.json"], 2),
    ("err_dimension", &["psum", "--a", "diag_a.json", "--b", "pd_b.json"], 2),
    ("err_unknown_flag", &["rep", "--a", "pd_a.json", "--b", "pd_b.json", "--bogus"], 2),
    ("err_bad_function", &["eval", "--phi", "cosine", "--a", "pd_a.json", "--b", "pd_b.json"], 2),
];

pub fn subcommands() -> [&'static str; 13] {
    [
        "rep", "eval", "lebesgue", "psum", "psum-limit", "singular", "abscont", "rn", "kubo", "pair", "trace",
        "tensor-check", "form-p",
    ]
}

/// Compares every case with its golden file; returns the list of mismatches.
/// With `UPDATE_GOLDEN=1` the files are rewritten instead.
pub fn check_goldens() -> Vec<String> {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut problems = Vec::new();
    for (name, args, code) in CASES {
        let out = pwcalc(args);
        if out.code != *code {
            problems.push(format!("{name}: exit {} (expected {code})", out.code));
        }
        let path = golden_dir().join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == out.stdout => {}
            Ok(_) => problems.push(format!("{name}: report differs from {}", path.display())),
            Err(e) => problems.push(format!("{name}: cannot read {}: {e}", path.display())),
        }
    }
    problems
}

/// Reads a `{n, re, im}` object back into row-major `(re, im)` pairs.
pub fn matrix_entries(v: &serde_json::Value) -> Vec<(f64, f64)> {
    let n = v["n"].as_u64().unwrap() as usize;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push((v["re"][i][j].as_f64().unwrap(), v["im"][i][j].as_f64().unwrap()));
        }
    }
    out
}
