use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bbtspec_cli::report::REPORT_SCHEMA;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bbtspec"))
}

fn symbols() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/symbols")
}

fn sym(name: &str) -> String {
    symbols().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn strip_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamp_unix");
    v
}

fn assert_valid(report: &Value) {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn analyze_b1_reports_two_enclosing_ovals() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["analyze", "--symbol", &sym("b1.json"), "--res", "256", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&dir.path().join("report.json"));
    assert_valid(&report);
    assert_eq!(report["reality"]["verdict"], "real");
    assert_eq!(report["gamma"]["census"]["enclosing"], 2);
    assert_eq!(report["agreement"], true);
    assert_eq!(report["symbol"]["p"], 2);
    assert_eq!(report["symbol"]["q"], 1);
    // Resolved defaults are echoed.
    assert!(report["config"]["lambda0_box"].is_object());
    assert!(report["config"]["gamma_box"].is_object());
    for f in ["lambda0.csv", "lambda0.svg", "gamma.csv", "gamma.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(dir.path().join("lambda0.csv")).unwrap();
    assert!(csv.starts_with("re,im,gap\n"));
}

#[test]
fn analyze_two_oval_symbol_has_non_enclosing_ovals() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["analyze", "--symbol", &sym("two_ovals.json"), "--res", "256", "--format", "json", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&dir.path().join("report.json"));
    assert!(report["gamma"]["census"]["non_enclosing"].as_u64().unwrap() >= 2);
    assert!(!dir.path().join("gamma.svg").exists());
}

#[test]
fn reruns_are_byte_identical_except_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let args = ["analyze", "--symbol", &sym("b1.json"), "--res", "128", "--implicit", "--out", &out];
    let snapshot = || {
        assert_eq!(code(&run(&args)), 0);
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().unwrap() != "json")
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
            .collect();
        files.sort();
        let report = read_json(&dir.path().join("report.json"));
        assert_valid(&report);
        (files, strip_timestamp(report))
    };
    let a = snapshot();
    let b = snapshot();
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
}

#[test]
fn malformed_symbol_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"k": 2, "blocks": {"-1": [[1, 2]]}}"#).unwrap();
    let o = run(&["analyze", "--symbol", &bad.display().to_string(), "--out", &dir.path().display().to_string()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("block -1 has 1 rows, expected 2"), "{err}");
    let o = run(&["analyze", "--symbol", "/nonexistent/symbol.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn flag_validation_uses_exit_code_two() {
    let b1 = sym("b1.json");
    for args in [
        vec!["analyze", "--symbol", &b1, "--res", "100"],
        vec!["analyze", "--symbol", &b1, "--res", "8192"],
        vec!["analyze", "--symbol", &b1, "--tol", "0"],
        vec!["analyze", "--symbol", &b1, "--box", "1,0,0,1"],
        vec!["analyze"],
        vec!["eig", "--symbol", &b1, "--n", "1001"],
        vec!["eig", "--symbol", &b1, "--n", "0"],
        vec!["sweep", "--symbol", &sym("b3.json"), "--param", "ZETA"],
        vec!["sweep", "--symbol", &sym("b3.json"), "--param", "XI", "--values", "1"],
        vec!["sweep", "--symbol", &sym("b3.json"), "--param", "ZETA", "--values", "1,abc"],
        vec!["newton-check", "--trials", "0"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = bin().args(["eig", "--symbol", &b1, "--n", "1"]).env("BBTSPEC_THREADS", "lots").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn eig_small_truncation_matches_two_by_two_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["eig", "--symbol", &sym("b1.json"), "--n", "1", "--out", &out]);
    assert_eq!(code(&o), 0);
    // T_1(B_1) = A_0 = [[8, -5], [-2, 5]]: trace 13, det 30, eigenvalues 3 and 10.
    let csv = fs::read_to_string(dir.path().join("eigenvalues.csv")).unwrap();
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0].0 - 3.0).abs() < 1e-12 && (rows[1].0 - 10.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| r.1 == 0.0));
    let svg = fs::read_to_string(dir.path().join("eigenvalues.svg")).unwrap();
    assert!(svg.contains(r#"cx="3.000000""#) && svg.contains(r#"cx="10.000000""#));
    let j = read_json(&dir.path().join("eigenvalues.json"));
    assert_eq!(j["eig"]["count"], 2);
}

#[test]
fn eig_rows_are_sorted_and_counted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["eig", "--symbol", &sym("b2.json"), "--n", "100", "--format", "csv", "--out", &out]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("eigenvalues.csv")).unwrap();
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 300);
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 <= w[1].1)));
    assert!(rows.iter().all(|r| r.1.abs() <= 1e-2));
}

#[test]
fn single_value_sweep_matches_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let sweep_out = dir.path().join("sweep");
    let o = run(&[
        "sweep",
        "--symbol",
        &sym("b3.json"),
        "--param",
        "ZETA",
        "--values",
        "47",
        "--res",
        "128",
        "--out",
        &sweep_out.display().to_string(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let substituted = dir.path().join("b3_47.json");
    fs::write(&substituted, fs::read_to_string(sym("b3.json")).unwrap().replace("\"$ZETA\"", "47")).unwrap();
    let analyze_out = dir.path().join("analyze");
    let o = run(&[
        "analyze",
        "--symbol",
        &substituted.display().to_string(),
        "--res",
        "128",
        "--out",
        &analyze_out.display().to_string(),
    ]);
    assert_eq!(code(&o), 0);
    let mut a = read_json(&sweep_out.join("report_ZETA_47.json"));
    let mut b = read_json(&analyze_out.join("report.json"));
    assert_valid(&a);
    for v in [&mut a, &mut b] {
        let o = v.as_object_mut().unwrap();
        for key in ["timestamp_unix", "config", "sweep_value"] {
            o.remove(key);
        }
    }
    assert_eq!(a, b);
    let summary = fs::read_to_string(sweep_out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().next().unwrap(), "value,reality,enclosing,min_ray_crossings");
    assert_eq!(summary.lines().count(), 2);
}

#[test]
fn sweep_summary_is_sorted_by_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&[
        "sweep", "--symbol", &sym("b3.json"), "--param", "$ZETA", "--values", "70,-5/2,10", "--res", "64", "--format",
        "csv", "--out", &out,
    ]);
    assert!(code(&o) <= 1);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let values: Vec<&str> = summary.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(values, ["-5/2", "10", "70"]);
    assert!(dir.path().join("lambda0_ZETA_-5d2.csv").exists());
}

#[test]
fn newton_check_random_trials_match_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["newton-check", "--trials", "100", "--k", "2,3", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let j = read_json(&dir.path().join("newton_check.json"));
    assert_eq!(j["summary"]["trials"], 100);
    assert_eq!(j["summary"]["oracle_matches"], 100);
    assert_eq!(j["summary"]["generic"], j["summary"]["generic_conforming"]);
    assert_eq!(j["results"].as_array().unwrap().len(), 100);
}

#[test]
fn newton_check_on_b1_gives_printed_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["newton-check", "--symbol", &sym("b1.json"), "--out", &out]);
    assert_eq!(code(&o), 0);
    let j = read_json(&dir.path().join("newton_check.json"));
    let mut verts: Vec<(i64, i64)> = j["results"][0]["newton_polygon"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v[0].as_i64().unwrap(), v[1].as_i64().unwrap()))
        .collect();
    verts.sort();
    assert_eq!(verts, [(-2, 0), (0, 2), (1, 0)]);
    assert_eq!(j["results"][0]["triangle"], true);
}

#[test]
fn newton_check_scalar_trials_are_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["newton-check", "--trials", "25", "--k", "1", "--seed", "9", "--out", &out]);
    assert_eq!(code(&o), 0);
    let j = read_json(&dir.path().join("newton_check.json"));
    for r in j["results"].as_array().unwrap() {
        let p = r["p"].as_i64().unwrap();
        let q = r["q"].as_i64().unwrap();
        let mut verts: Vec<(i64, i64)> =
            r["newton_polygon"].as_array().unwrap().iter().map(|v| (v[0].as_i64().unwrap(), v[1].as_i64().unwrap())).collect();
        verts.sort();
        assert_eq!(verts, [(-p, 0), (0, 1), (q, 0)]);
    }
}

#[test]
fn gamma_and_lambda0_subcommands_write_their_sections() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["gamma", "--symbol", &sym("b2.json"), "--res", "256", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report = read_json(&dir.path().join("report.json"));
    assert_valid(&report);
    assert!(report["lambda0"].is_null());
    assert_eq!(report["gamma"]["census"]["enclosing"], 3);
    assert!(report["rays"]["min_crossings"].as_u64().unwrap() >= 3);
    let o = run(&["lambda0", "--symbol", &sym("joukowski.json"), "--res", "256", "--box", "-3,3,-1,1", "--out", &out]);
    assert_eq!(code(&o), 0);
    let report = read_json(&dir.path().join("report.json"));
    assert!(report["gamma"].is_null());
    assert_eq!(report["reality"]["verdict"], "real");
    let range = &report["lambda0"]["re_range"];
    assert!(range[0].as_f64().unwrap() > -2.1 && range[1].as_f64().unwrap() < 2.1);
}
