use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn teich(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_teich")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = teich(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad json ({e}): {out}\n{err}"));
    (code, v)
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn epsilon_of_torus() {
    let t = path("torus.json");
    let (code, v) = report(&["epsilon", "--triangulation", &t]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["labels"], serde_json::json!(["alpha", "beta", "gamma"]));
    assert_eq!(v["result"]["rows"], serde_json::json!([[0, -2, 2], [2, 0, -2], [-2, 2, 0]]));
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["status"], "pass");
}

#[test]
fn bracket_is_exact() {
    let (t, a, b) = (path("torus.json"), path("torus_weights_a.json"), path("torus_weights_b.json"));
    let (code, v) = report(&["bracket", "--triangulation", &t, "--weights-a", &a, "--weights-b", &b]);
    assert_eq!(code, 0);
    // a = (1, -1, 0), b = (2, 1/2, -5/2); omega = sum eps_ef a_e b_f
    assert_eq!(v["result"]["omega"], "-5/2");
    assert_eq!(v["result"]["poisson_bracket"], "-5");
    assert_eq!(v["result"]["wp_shear_pairing"], "-5/4");
}

#[test]
fn forms_report_the_factor_of_four() {
    let t = path("tetrahedron.json");
    let (code, v) = report(&["forms", "--triangulation", &t]);
    let r = &v["result"];
    let scaled: Vec<Vec<i64>> = serde_json::from_value::<Vec<Vec<i64>>>(r["lambda"].clone())
        .unwrap()
        .into_iter()
        .map(|row| row.into_iter().map(|x| 4 * x).collect())
        .collect();
    assert_eq!(r["h_triangles"], serde_json::json!(scaled));
    assert_eq!(r["h_triangles"], r["h_cusps"]);
    assert_eq!(r["lambda"], r["lambda_sigma"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
}

#[test]
fn lpr_formal_and_float() {
    let (t, b) = (path("torus.json"), path("torus_weights_b.json"));
    for l in ["torus_log_lambdas.json", "torus_lambdas.json"] {
        let l = path(l);
        let (code, v) = report(&["lpr-check", "--triangulation", &t, "--lambdas", &l, "--weights-b", &b]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["inputs"][1]["path"].as_str().unwrap(), l);
    }
}

#[test]
fn flip_with_exact_ptolemy() {
    let (t, l) = (path("torus.json"), path("torus_exact_lambdas.json"));
    let (code, v) = report(&["flip", "--triangulation", &t, "--edge", "gamma", "--lambdas", &l]);
    assert_eq!(code, 0);
    // opposite sides of the torus square pair up: (alpha² + beta²)/gamma = (9/4 + 1)/2
    assert_eq!(v["result"]["lambdas"]["gamma"], "13/8");
    assert_eq!(v["result"]["lambdas"]["alpha"], "3/2");
}

#[test]
fn develop_torus_is_parabolic() {
    let (t, s) = (path("torus.json"), path("torus_shears.json"));
    let (code, v) = report(&["develop", "--triangulation", &t, "--shears", &s, "--depth", "2"]);
    assert_eq!(code, 0);
    let tr = v["result"]["holonomy"][0]["trace"].as_f64().unwrap();
    assert!((tr.abs() - 2.0).abs() < 1e-9, "{tr}");
}

#[test]
fn circuit_sum_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let (code, v) = report(&["circuit-sum", "--a", "0.5", "--ell", "0.1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("a,ell,brute,asymptotic,asymptotic_gamma_a\n"));
    assert!(v["result"]["difference_gamma_a"].as_f64().unwrap().abs() < 1e-3);
}

#[test]
fn gardiner_tolerance_sets_exit_code() {
    let (ok, _) = report(&["gardiner", "--z", "0.37+0.59i", "--N", "1000", "--tolerance", "1e-2"]);
    assert_eq!(ok, 0);
    let (bad, v) = report(&["gardiner", "--z", "0.37+0.59i", "--N", "1000", "--tolerance", "1e-6"]);
    assert_eq!(bad, 1);
    assert_eq!(v["checks"][0]["status"], "fail");
}

#[test]
fn shpr_is_symmetric() {
    let (a, b) = (path("gamma2_a.json"), path("gamma2_b.json"));
    let (_, ab) = report(&["shpr", "--A", &a, "--B", &b, "--cutoff", "60"]);
    let (_, ba) = report(&["shpr", "--weights-a", &b, "--weights-b", &a, "--cutoff", "60"]);
    assert_eq!(ab["result"]["value"], ba["result"]["value"]);
}

#[test]
fn output_independent_of_threads() {
    let (_, one, _) = teich(&["--threads", "1", "dedekind", "--cutoff", "60"]);
    let (_, four, _) = teich(&["dedekind", "--cutoff", "60", "--threads", "4"]);
    let (_, plain, _) = teich(&["dedekind", "--cutoff", "60"]);
    assert_eq!(one, four);
    assert_eq!(one, plain);
}

#[test]
fn timing_only_on_request() {
    let (_, v) = report(&["dedekind", "--cutoff", "20"]);
    assert!(v.get("timing_seconds").is_none());
    let (_, v) = report(&["--timing", "dedekind", "--cutoff", "20"]);
    assert!(v["timing_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(teich(&["--help"]).0, 0);
    assert_eq!(teich(&["forms", "--no-such-flag"]).0, 2);
    assert_eq!(teich(&["gardiner", "--z", "1+i"]).0, 2);
    assert_eq!(teich(&["circuit-sum", "--a", "0.5", "--ell", "-1"]).0, 2);
    assert_eq!(teich(&["forms", "--triangulation", "/no/such/file.json"]).0, 3);
    let t = path("torus.json");
    assert_eq!(teich(&["flip", "--triangulation", &t, "--edge", "delta"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    let (code, out, err) = teich(&["epsilon", "--triangulation", junk.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"triangles": [["a", "a", "b"]]}"#).unwrap();
    assert_eq!(teich(&["check", "--triangulation", bad.to_str().unwrap()]).0, 2);
}
