//! End-to-end tests driving the compiled binary: exit codes, text output,
//! JSON report shape and determinism, graph-file subcommands, and the atlas
//! extension flow.

use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn knotgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_report(args: &[&str]) -> Value {
    let out = knotgraph(args);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

/// Structural validation against schema/report.schema.json: exactly the
/// required top-level keys, correct types, and provenance entry shape.
fn validate_schema(report: &Value) {
    let schema_text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../schema/report.schema.json"
    ))
    .expect("schema file present");
    let schema: Value = serde_json::from_str(&schema_text).unwrap();
    let required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let obj = report.as_object().expect("report is an object");
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    let mut expected = required.clone();
    expected.sort_unstable();
    assert_eq!(keys, expected, "top-level keys, alphabetical");
    let commands: Vec<&str> = schema["properties"]["command"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(commands.contains(&report["command"].as_str().unwrap()));
    assert!(report["inputs"].is_object());
    assert!(report["results"].is_object());
    assert!(report["verdict"].is_string());
    for entry in report["provenance"].as_array().expect("provenance array") {
        assert!(entry["rule"].is_string());
        assert!(entry["detail"].is_string());
    }
}

#[test]
fn brieskorn_text_output() {
    let out = knotgraph(&["brieskorn", "2", "15", "9"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(Z_2)^2"));
}

#[test]
fn brieskorn_rejects_degenerate_weights() {
    let out = knotgraph(&["brieskorn", "1", "2", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invariants_reports_additive_values() {
    let report = json_report(&["invariants", "2*T(2,9) + m(3_1)", "--json"]);
    validate_schema(&report);
    assert_eq!(report["results"]["tau"], 7);
    assert_eq!(report["results"]["s_half"], 7);
    assert_eq!(report["results"]["g4"]["lower"], 7);
    assert_eq!(report["results"]["g4"]["upper"], 9);
}

#[test]
fn cover_matches_tabulated_stevedore() {
    let report = json_report(&["cover", "6_1", "--degree", "2", "--json"]);
    validate_schema(&report);
    assert_eq!(report["results"]["group"]["display"], "Z_9");
    assert_eq!(report["results"]["e"], 1);
}

#[test]
fn cover_of_whitehead_double_fails_verification() {
    let out = knotgraph(&["cover", "Wh", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dist_h2_lower_bound() {
    let report = json_report(&["dist", "--graph", "h2", "U", "6*T(2,9)", "--json"]);
    validate_schema(&report);
    assert_eq!(report["results"]["lower_integer"], 6);
    assert_eq!(report["results"]["lower"], "6");
}

#[test]
fn dist_concordance_lower_bound() {
    let report = json_report(&["dist", "--graph", "cc", "U", "T(2,5)", "--json"]);
    assert_eq!(report["results"]["lower_integer"], 2);
}

#[test]
fn dist_rejects_unknown_graph() {
    let out = knotgraph(&["dist", "--graph", "h0", "U", "U"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_h2_separation() {
    let report = json_report(&["certify", "--family", "h2", "--k", "4", "--json"]);
    validate_schema(&report);
    assert_eq!(report["results"]["separation_lower"], "3");
    let edges = report["results"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    assert!(edges.iter().all(|e| e["geodesic"] == true));
}

#[test]
fn certify_rejects_nonpositive_k() {
    let out = knotgraph(&["certify", "--family", "h2", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_hn_requires_n() {
    let out = knotgraph(&["certify", "--family", "hn", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = knotgraph(&["certify", "--family", "hn", "--n", "3", "--k", "2"]);
    assert!(out.status.success());
}

#[test]
fn certify_json_is_deterministic() {
    let a = knotgraph(&["certify", "--family", "cc", "--k", "3", "--json"]);
    let b = knotgraph(&["certify", "--family", "cc", "--k", "3", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "byte-identical JSON across runs");
}

#[test]
fn parse_errors_carry_byte_offsets_and_exit_two() {
    let out = knotgraph(&["invariants", "T(2,"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("byte 4"));
    let out = knotgraph(&["invariants", "T(2,4)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("coprime"));
}

#[test]
fn quotient_models() {
    let report = json_report(&["quotient", "--model", "noncompat", "--size", "6", "--json"]);
    validate_schema(&report);
    assert_eq!(report["results"]["diameter"], 2);
    assert_eq!(report["results"]["line_embeddable_first_four"], false);

    let report = json_report(&["quotient", "--model", "tau", "--size", "3", "--json"]);
    assert_eq!(report["results"]["vertices"], 7);

    let report = json_report(&["quotient", "--model", "g4xu", "--size", "2", "--json"]);
    assert_eq!(report["results"]["points"].as_array().unwrap().len(), 6);

    let out = knotgraph(&["quotient", "--model", "bogus", "--size", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_file_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = dir.path().join("c5.txt");
    let mut f = std::fs::File::create(&c5).unwrap();
    writeln!(f, "# 5-cycle\na b\nb c\nc d\nd e\ne a").unwrap();
    drop(f);

    let report = json_report(&["hyperbolicity", c5.to_str().unwrap(), "--json"]);
    validate_schema(&report);
    assert_eq!(report["results"]["delta_four_point"], "1/2");
    assert_eq!(report["results"]["vertices"], 5);

    let report = json_report(&["link", c5.to_str().unwrap(), "a", "--json"]);
    assert_eq!(report["results"]["diameter"], "disconnected");
    assert_eq!(report["results"]["link_vertices"].as_array().unwrap().len(), 2);

    let out = knotgraph(&["link", c5.to_str().unwrap(), "zz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qi_check_accepts_halving_map_and_flags_isometry_claim() {
    let dir = tempfile::tempdir().unwrap();
    let p9 = dir.path().join("p9.txt");
    let p5 = dir.path().join("p5.txt");
    let map = dir.path().join("map.txt");
    std::fs::write(
        &p9,
        "p0 p1\np1 p2\np2 p3\np3 p4\np4 p5\np5 p6\np6 p7\np7 p8\n",
    )
    .unwrap();
    std::fs::write(&p5, "a b\nb c\nc d\nd e\n").unwrap();
    std::fs::write(
        &map,
        "p0 a\np1 a\np2 b\np3 b\np4 c\np5 c\np6 d\np7 d\np8 e\n",
    )
    .unwrap();
    let args = |a: &'static str, b: &'static str| {
        vec![
            "qi-check".to_string(),
            p9.to_str().unwrap().to_string(),
            p5.to_str().unwrap().to_string(),
            map.to_str().unwrap().to_string(),
            "--a".into(),
            a.into(),
            "--b".into(),
            b.into(),
            "--C".into(),
            "0".into(),
        ]
    };
    let ok = Command::new(env!("CARGO_BIN_EXE_knotgraph"))
        .args(args("2", "1"))
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_knotgraph"))
        .args(args("1", "0"))
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("lower inequality"));
}

#[test]
fn atlas_extension_flow() {
    let dir = tempfile::tempdir().unwrap();
    let atlas = dir.path().join("atlas.txt");
    std::fs::write(&atlas, "# custom\nK_x 2 2 3 2 cover:m=2:Z3+Z9\n").unwrap();
    let report = json_report(&[
        "--atlas",
        atlas.to_str().unwrap(),
        "cover",
        "K_x",
        "--degree",
        "2",
        "--json",
    ]);
    assert_eq!(report["results"]["group"]["display"], "Z_3 + Z_9");

    // A degree the atlas entry does not tabulate is a verification failure.
    let out = knotgraph(&[
        "--atlas",
        atlas.to_str().unwrap(),
        "cover",
        "K_x",
        "--degree",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // A malformed atlas file is a usage error.
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "bad 1 2\n").unwrap();
    let out = knotgraph(&["--atlas", bad.to_str().unwrap(), "invariants", "U"]);
    assert_eq!(out.status.code(), Some(2));
}
