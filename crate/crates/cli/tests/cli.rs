use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use hyperfocus_cli::io::{load_arc, load_catalog, save_arc, save_catalog, IoError};
use hyperfocus_cli::report::{RunReport, Verdict};
use hyperfocus_core::arcs::example_n1;
use hyperfocus_core::gf2::{FieldElement, FieldSpec};
use hyperfocus_core::onefact::{canonical_form, enumerate_factorizations};
use serde_json::Value;

fn hyperfocus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperfocus")).args(args).output().unwrap()
}

fn report(out: &Output) -> RunReport {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const QUADRANGLE: &str = r#"{"field": {"r": 2, "poly": "0x7"},
  "points": [["0x0","0x0","0x1"],["0x0","0x1","0x1"],["0x1","0x0","0x1"],["0x1","0x1","0x1"]]}"#;

#[test]
fn enumerate_counts_classes() {
    let out = hyperfocus(&["onefact", "enumerate", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.result["classes"], 6);
    assert_eq!(r.verdicts["count"], Verdict::Pass);
    let out = hyperfocus(&["onefact", "enumerate", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("k8.txt");
    let cat = cat.to_str().unwrap();
    let out = hyperfocus(&["onefact", "enumerate", "--n", "4", "--out", cat]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(cat).unwrap().lines().count(), 6);

    // Case 1 does not close, so the closure verdict fails on K8.
    let out = hyperfocus(&["onefact", "closure", "--catalog", cat, "--report", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r.result["failures"], 1);
    assert!(r.witnesses["contains_all"]["line"].is_string());

    let out = hyperfocus(&["onefact", "embed", "--catalog", cat, "--q", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let total: u64 = r.result["entries"].as_array().unwrap().iter().map(|e| e["embeddings"].as_u64().unwrap()).sum();
    assert!(total > 0);

    let out = hyperfocus(&["--format", "csv", "onefact", "closure", "--catalog", cat]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,contains_all,depth\n"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"field\": {\"r\": 2, ");
    let out = hyperfocus(&["arc", "verify", "--in", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));

    let foreign = write(dir.path(), "foreign.json", &QUADRANGLE.replace("\"0x1\",\"0x1\",\"0x1\"", "\"0x9\",\"0x1\",\"0x1\""));
    let out = hyperfocus(&["arc", "verify", "--in", &foreign]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("points[3][0]"));

    let cat = write(dir.path(), "cat.txt", "1-2 3-4|1-3 2-4|1-4 2-3\n1-2 3-4|1-3 2-4|1-4 2-4\n");
    let out = hyperfocus(&["onefact", "closure", "--catalog", &cat]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(hyperfocus(&["arc", "verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(hyperfocus(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hyperfocus(&["field", "--r", "4", "--poly", "0x15"]).status.code(), Some(2));
    assert_eq!(hyperfocus(&["ghf", "build", "--q", "12"]).status.code(), Some(2));
}

#[test]
fn verify_reports_collinear_witness() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "quad.json", QUADRANGLE);
    let out = hyperfocus(&["arc", "verify", "--in", &good]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.result["hyperfocused_lines"][0]["line"], serde_json::json!(["0x0", "0x0", "0x1"]));

    let line = write(
        dir.path(),
        "line.json",
        r#"{"field": {"r": 2, "poly": "0x7"}, "points": [["0x1","0x0","0x0"],["0x0","0x1","0x0"],["0x1","0x1","0x0"]]}"#,
    );
    let out = hyperfocus(&["arc", "verify", "--in", &line]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out).witnesses["arc"].as_array().unwrap().len(), 3);
}

#[test]
fn blocking_and_ghf() {
    let dir = tempfile::tempdir().unwrap();
    let quad = write(dir.path(), "quad.json", QUADRANGLE);
    let out = hyperfocus(&["blocking", "find", "--in", &quad, "--all"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.result["count"], 1);
    assert_eq!(r.result["sets"][0]["linear"], true);

    let out = hyperfocus(&["ghf", "build", "--q", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out).verdicts["parameters"], Verdict::Fail);

    let out = hyperfocus(&["ghf", "build", "--q", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.result["blocking_set"]["points"].as_array().unwrap().len(), 7);
    assert_eq!(r.result["blocking_set"]["linear"], false);
    assert_eq!(r.result["homology"].as_array().unwrap().len(), 9);

    let out = hyperfocus(&["ghf", "build", "--q", "16", "--lambda", "0x2", "--a1", "0x1", "--a2", "0x4"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hyperfocus(&["ghf", "build", "--q", "16", "--lambda", "0x2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn arc_examples() {
    let out = hyperfocus(&["arc", "build", "--example", "n1", "--r", "4", "--s", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).result["size"], 4);

    // A build report can be fed straight back to verify.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n1.json");
    let p = path.to_str().unwrap();
    assert_eq!(hyperfocus(&["arc", "build", "--example", "n1", "--r", "3", "--out", p]).status.code(), Some(0));
    let out = hyperfocus(&["arc", "verify", "--in", p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).verdicts["arc"], Verdict::Pass);

    let out = hyperfocus(&["arc", "build", "--example", "n2", "--r", "5", "--i", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.verdicts["in_hyperoval"], Verdict::Pass);
    assert_eq!(r.result["size"], 32);
    assert_eq!(hyperfocus(&["arc", "build", "--example", "n2", "--r", "6", "--i", "2"]).status.code(), Some(2));

    let out = hyperfocus(&["arc", "build", "--example", "n3", "--r", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.result["candidates"], 24);
    assert_eq!(r.verdicts["two_conics"], Verdict::Pass);

    let out = hyperfocus(&["arc", "complete", "--r", "6", "--s", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.verdicts["hyperoval_not_contained"], Verdict::Pass);
    assert_eq!(r.verdicts["subplane_not_contained"], Verdict::Pass);
    assert_eq!(r.verdicts["affinely_complete"], Verdict::Pass);
    assert_eq!(r.result["size"], 32);
}

fn strip_timing(out: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("duration_us");
    v.as_object_mut().unwrap().remove("command");
    v
}

#[test]
fn output_ignores_thread_count() {
    let a = hyperfocus(&["classify", "--q", "8", "--max-k", "8", "--threads", "1"]);
    let b = hyperfocus(&["classify", "--q", "8", "--max-k", "8", "--threads", "3"]);
    assert_eq!(strip_timing(&a), strip_timing(&b));
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn report_round_trips() {
    let out = hyperfocus(&["ghf", "build", "--q", "16"]);
    let r = report(&out);
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
    assert!(r.passed());
}

#[test]
fn arc_and_catalog_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = FieldSpec::with_degree(3).unwrap();
    let arc = example_n1(spec, &[1, 2, 4].map(FieldElement::from_raw)).unwrap();
    let p = dir.path().join("arc.json");
    save_arc(&p, &arc).unwrap();
    assert_eq!(load_arc(&p).unwrap(), arc);
    let text = std::fs::read_to_string(&p).unwrap();
    save_arc(&p, &load_arc(&p).unwrap()).unwrap();
    assert_eq!(std::fs::read_to_string(&p).unwrap(), text);

    let c = dir.path().join("cat.txt");
    let classes = enumerate_factorizations(4).unwrap();
    save_catalog(&c, &classes).unwrap();
    assert_eq!(load_catalog(&c).unwrap(), classes);

    let line = write(
        dir.path(),
        "line.json",
        r#"{"field": {"r": 3, "poly": "0xb"}, "points": [["0x1","0x0","0x0"],["0x0","0x1","0x0"],["0x1","0x1","0x0"]]}"#,
    );
    assert!(matches!(load_arc(Path::new(&line)), Err(IoError::NotAnArc { .. })));
}

/// A catalog written by someone else, with arbitrary vertex labels and
/// factor order, still yields 396 classes after canonicalization.
#[test]
fn ingest_relabelled_k10_catalog() {
    let classes = enumerate_factorizations(5).unwrap();
    let mut lines = Vec::new();
    for (i, f) in classes.iter().enumerate() {
        let perm: Vec<usize> = (0..10).map(|v| (v * 3 + i) % 10).collect();
        let order: Vec<usize> = (0..9).map(|k| (k * 2 + i) % 9).collect();
        lines.push(f.relabel(&perm).reorder_factors(&order).to_catalog_line());
    }
    lines.reverse();
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "external.txt", &(lines.join("\n") + "\n"));
    let loaded = load_catalog(Path::new(&p)).unwrap();
    assert_eq!(loaded.len(), 396);
    let codes: BTreeSet<Vec<u8>> = loaded.iter().map(|f| canonical_form(f).code().to_vec()).collect();
    assert_eq!(codes.len(), 396);
    let originals: BTreeSet<Vec<u8>> = classes.iter().map(|f| canonical_form(f).code().to_vec()).collect();
    assert_eq!(codes, originals);
}
