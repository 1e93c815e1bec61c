use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sympcalc::geometry::{builtin_chart, chart_to_file, BuiltinKind, ChartFile, ChristoffelEntry, ConnectionSpec};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

fn write_chart(dir: &Path, name: &str, file: &ChartFile) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(file).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn verify_rs_on_flat_chart() {
    let out = run(&["verify", "rs", "--chart", "builtin:flat", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["passed"], true);
    assert_eq!(r["config"]["seed"], 0);
    assert_eq!(r["config"]["trials"], 16);
}

#[test]
fn verify_tractor_on_cp1_reports_flatness_and_invertible_theta() {
    let out = run(&["verify", "tractor", "--chart", "builtin:fubini_study", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(check(&r, "flat_iff_v_zero")["data"]["v_zero"], true);
    assert_eq!(check(&r, "theta_invertible")["passed"], true);
    assert_eq!(check(&r, "theta_matches_cpn_formula")["passed"], true);
}

#[test]
fn invalid_configuration_exits_with_two() {
    for args in [
        &["verify", "rs", "--chart", "builtin:flat", "--n", "0"][..],
        &["verify", "rs", "--chart", "builtin:nowhere"],
        &["verify", "rs", "--deg-bound", "0"],
        &[
            "verify",
            "kahler",
            "--chart",
            "builtin:random",
            "--n",
            "1",
            "--trials",
            "1",
        ],
        &["verify", "lemma3", "--rep", "standard"],
        &["cohomology", "--rep", "sym:2(standard"],
        &["verify", "rs", "--chart", "/nonexistent/chart.json"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn non_flat_coupling_fails_with_witness() {
    let out = run(&[
        "verify",
        "rs",
        "--chart",
        "builtin:flat",
        "--n",
        "2",
        "--rep",
        "random",
        "--deg-bound",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let failed: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false && c["data"]["status"] == "nonzero")
        .collect();
    assert!(!failed.is_empty());
    assert!(failed[0]["detail"].as_str().unwrap().starts_with("on "));
}

#[test]
fn cohomology_examples() {
    let r = json(&run(&["cohomology", "--rep", "trivial", "--n", "1"]));
    assert_eq!(r["results"]["cohomology"]["ce_dims"], serde_json::json!([1, 2, 2, 1]));

    let out = run(&["cohomology", "--rep", "standard", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let dims = &r["results"]["cohomology"]["ce_dims"];
    assert_eq!(dims[0], 1);
    assert_eq!(dims[1], 10);

    let r = json(&run(&["cohomology", "--rep", "sym:2(standard)", "--n", "1"]));
    let c = &r["results"]["cohomology"];
    assert_eq!(c["ce_dims"], c["bgg_dims"]);
    assert_eq!(c["match"], true);
}

#[test]
fn chart_lint_round_trip_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let flat = chart_to_file(&builtin_chart(BuiltinKind::Flat, 1).unwrap());
    let out = run(&["chart-lint", &write_chart(dir.path(), "flat.json", &flat)]);
    assert_eq!(out.status.code(), Some(0));

    let fs = chart_to_file(&builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap());
    let out = run(&["chart-lint", &write_chart(dir.path(), "fs.json", &fs)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["results"]["v_zero"], true);
    assert_eq!(r["results"]["kahler"], true);

    let mut torsion = flat.clone();
    torsion.connection = ConnectionSpec::Christoffel(vec![ChristoffelEntry {
        upper: 0,
        lower1: 0,
        lower2: 1,
        expr: "x1".into(),
    }]);
    let out = run(&["chart-lint", &write_chart(dir.path(), "torsion.json", &torsion)]);
    assert_eq!(out.status.code(), Some(1));
    let detail = check(&json(&out), "invariants")["detail"].as_str().unwrap().to_string();
    assert!(detail.contains("Gamma^0_01"), "{detail}");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": \"x\"").unwrap();
    assert_eq!(run(&["chart-lint", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn text_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = run(&[
        "verify",
        "lemma3",
        "--n",
        "1",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("verify lemma3 [PASS]"), "{text}");
    assert!(text.contains("ok   lemma3/nabla_y"));
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify",
        "kahler",
        "--chart",
        "builtin:fubini_study",
        "--n",
        "1",
        "--seed",
        "5",
        "--trials",
        "4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
