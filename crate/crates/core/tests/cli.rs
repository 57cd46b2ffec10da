//! End-to-end runs of the `qgverify` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgverify"))
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().arg("run").args(args).arg("--out").arg(out).output().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas/report.v1.schema.json");
    let v: Value = read_json(&p);
    jsonschema::JSONSchema::compile(&v).unwrap()
}

fn assert_valid(report: &Value) {
    let s = schema();
    if let Err(errs) = s.validate(report) {
        let msgs: Vec<String> = errs.map(|e| e.to_string()).collect();
        panic!("schema violations: {msgs:?}");
    };
}

#[test]
fn every_suite_emits_schema_valid_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("relations", &["--q", "0.5", "--lmax", "8"]),
        ("podles", &["--q", "-0.3", "--lmax", "8"]),
        ("lemma1", &["--q", "0.9", "--lmax", "8"]),
        ("lemma2", &["--q", "0.3", "--lmax", "10"]),
        ("lemma3", &["--q", "-0.9", "--lmax", "8"]),
        ("fredholm", &["--q", "0.3", "--lmax", "8"]),
        ("rotation", &["--q", "-0.5", "--lmax", "10", "--l0", "4"]),
        ("degenerate", &["--q", "-0.5", "--lmax", "8"]),
        ("koszul", &["--n", "4", "--D", "12"]),
        ("fusion", &["--n", "3", "--q", "-0.38"]),
        ("foq", &["--seed", "7"]),
    ];
    for (suite, args) in cases {
        let out = dir.path().join(format!("{suite}.json"));
        let mut full = vec!["--suite", suite];
        full.extend_from_slice(args);
        let o = run(&full, &out);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stdout));
        let r = read_json(&out);
        assert_valid(&r);
        assert_eq!(r["suite"], *suite);
        assert_eq!(r["overall"], "pass");
    }
}

#[test]
fn all_suite_passes_for_negative_q() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.json");
    let o = run(&["--suite", "all", "--q", "-0.5", "--lmax", "12"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = read_json(&out);
    assert_valid(&r);
    let anchors: Vec<&str> =
        r["checks"].as_array().unwrap().iter().map(|c| c["paper_anchor"].as_str().unwrap()).collect();
    assert!(anchors.contains(&"Theorem 4.5 rotation homotopy"));
    assert!(anchors.contains(&"Theorem 7.5"));
}

#[test]
fn all_suite_skips_rotation_for_positive_q() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.json");
    let o = run(&["--suite", "all", "--q", "0.5", "--lmax", "8"], &out);
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["paper_anchor"] != "Theorem 4.5 rotation homotopy"));
    assert!(r["assumptions"].as_array().unwrap().iter().any(|a| a.as_str().unwrap().contains("rotation")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    // Verification failure.
    let o = run(&["--suite", "lemma3", "--q", "-0.5", "--lmax", "6", "--inject-sign-fault"], &out);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(read_json(&out)["overall"], "fail");
    // -sgn(q) is wrong for either sign of q.
    let o = run(&["--suite", "lemma3", "--q", "0.5", "--lmax", "6", "--inject-sign-fault"], &out);
    assert_eq!(o.status.code(), Some(1));
    // Usage errors.
    for args in [
        &["--suite", "rotation", "--q", "0.5", "--lmax", "10"][..],
        &["--suite", "nope", "--q", "0.5", "--lmax", "10"],
        &["--suite", "relations", "--q", "1.5", "--lmax", "10"],
        &["--suite", "relations", "--lmax", "10"],
        &["--suite", "relations", "--q", "0.5", "--lmax", "3/4"],
        &["--suite", "lemma1", "--q", "0.5", "--lmax", "4", "--t-grid", "1"],
        &["--suite", "koszul", "--n", "1"],
    ] {
        let o = run(args, &out);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = bin().args(["run", "--suite", "relations"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    for args in [&["--suite", "foq", "--seed", "3"][..], &["--suite", "lemma1", "--q", "-0.3", "--lmax", "6"]] {
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        run(args, &a);
        run(args, &b);
        assert_eq!(strip(read_json(&a)), strip(read_json(&b)), "{args:?}");
    }
}

#[test]
fn csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let csv = dir.path().join("csv");
    let o = bin()
        .args(["run", "--suite", "lemma2", "--q", "0.5", "--lmax", "12", "--csv"])
        .arg(&csv)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(csv.join("lemma2_decay.csv")).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("l,family,sup_residual"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // l = 1..=40, eight gated families.
    assert_eq!(rows.len(), 40 * 8);
    for r in &rows {
        assert_eq!(r.len(), 3);
        let v: f64 = r[2].parse().unwrap();
        assert!(v.is_finite() && v >= 0.0);
    }

    let o = bin()
        .args(["run", "--suite", "fredholm", "--q", "-0.3", "--lmax", "8", "--csv"])
        .arg(&csv)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(csv.join("fredholm_tails.csv")).unwrap();
    assert!(body.starts_with("l,family,sup_residual\n"));
    assert!(body.contains(",[F,A],") && body.contains(",[F,B],"));
}

#[test]
fn list_suites_covers_catalog() {
    let o = bin().arg("list-suites").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for s in qgverify::suite::SuiteName::ALL {
        assert!(text.lines().any(|l| l.starts_with(s.as_str())), "{s} missing");
    }
    for a in qgverify::suite::catalog_anchors() {
        assert!(text.contains(a), "{a} missing");
    }
}

#[test]
fn every_report_anchor_is_in_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.json");
    run(&["--suite", "all", "--q", "-0.3", "--lmax", "10"], &out);
    let cat = qgverify::suite::catalog_anchors();
    for c in read_json(&out)["checks"].as_array().unwrap() {
        let a = c["paper_anchor"].as_str().unwrap();
        assert!(cat.contains(&a), "anchor {a} not in catalog");
    }
}
