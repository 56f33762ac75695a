//! End-to-end tests driving the compiled binary: exit codes, output
//! formats, and the JSON round-trip guarantee.

use std::path::Path;
use std::process::{Command, Output};

fn dncayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dncayley"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn check_exits_one_with_a_witness_on_a_non_integral_set() {
    let out = dncayley(&["check", "--set", "n=7; s1=; s2=1,2,4"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("verdict: not_integral"), "{text}");
    assert!(
        text.contains("2chi_h(S2^2) = 8 at h = 1"),
        "witness missing: {text}"
    );
}

#[test]
fn check_exits_zero_on_an_integral_set() {
    let out = dncayley(&["check", "--set", "n=6; s1=3; s2=0,2,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: integral"));
}

#[test]
fn validation_errors_exit_two_and_can_be_json() {
    let out = dncayley(&["check", "--set", "n=2; s1=; s2=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));

    let out = dncayley(&["--json-errors", "check", "--set", "n=2; s1=; s2=0"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_str(stderr(&out).trim()).expect("JSON stderr");
    assert_eq!(err["error"]["code"], 2);
    assert!(err["error"]["message"].as_str().unwrap().contains("n = 2"));
}

#[test]
fn missing_input_is_a_usage_error() {
    let out = dncayley(&["check"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--set or --file"));
}

#[test]
fn exact_spectrum_on_an_irrational_set_exits_two_without_output() {
    let out = dncayley(&["spectrum", "--set", "n=7; s1=; s2=1,2,4", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out), "", "no partial spectrum may be emitted");
    assert!(stderr(&out).contains("exact spectrum unavailable"));
}

#[test]
fn float_spectrum_works_on_the_same_set() {
    let out = dncayley(&["spectrum", "--set", "n=7; s1=; s2=1,2,4", "--mode", "float"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("mode: float"), "{text}");
    assert!(text.contains("3^1"), "{text}");
}

#[test]
fn exact_spectrum_json_round_trips_the_set() {
    let out = dncayley(&[
        "spectrum",
        "--set",
        "n=3; s1=1,2; s2=0,1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["set"]["n"], 3);
    assert_eq!(payload["spectrum"]["exact"], true);
    let eigenvalues = payload["spectrum"]["eigenvalues"].as_array().unwrap();
    let rendered: Vec<(String, u64)> = eigenvalues
        .iter()
        .map(|e| {
            (
                e["value"].as_str().unwrap().to_string(),
                e["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        rendered,
        vec![
            ("4".to_string(), 1),
            ("0".to_string(), 3),
            ("-2".to_string(), 2)
        ]
    );
}

#[test]
fn ramanujan_matches_the_closed_form() {
    let out = dncayley(&["ramanujan", "--s", "1", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "-1");

    let out = dncayley(&["ramanujan", "--s", "0", "--n", "12", "--format", "json"]);
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["value"], 4); // c(0, n) = φ(n)

    let out = dncayley(&["ramanujan", "--s", "1", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dp_list_emits_reparsable_integral_sets() {
    let out = dncayley(&["dp-list", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let sets: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(sets.len(), 30);

    // Round-trip: every emitted set re-parses and is integral.
    let dir = tempfile::tempdir().unwrap();
    for (i, set) in sets.iter().enumerate().step_by(7) {
        let path = dir.path().join(format!("set{i}.json"));
        std::fs::write(&path, serde_json::to_string(set).unwrap()).unwrap();
        let out = dncayley(&["check", "--file", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "set {set}");
    }

    let out = dncayley(&["dp-list", "7", "--include-empty-s2", "--format", "text"]);
    assert_eq!(stdout(&out).lines().count(), 32);

    let out = dncayley(&["dp-list", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not an odd prime"));
}

#[test]
fn census_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("census4.csv");
    let summary = dir.path().join("summary4.json");
    let out = dncayley(&[
        "census",
        "--n",
        "4",
        "--out",
        csv.to_str().unwrap(),
        "--summary-out",
        summary.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 64, "header plus 2^(2+4) rows");
    assert!(rows.lines().next().unwrap().starts_with("n,s1,s2,"));

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(summary["total"], 64);
    assert_eq!(summary["disagreements"], 0);
    let printed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(printed, summary);
}

#[test]
fn census_jsonl_rows_parse_individually() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.jsonl");
    let out = dncayley(&[
        "census",
        "--n",
        "4",
        "--nonempty-s2",
        "--out",
        path.to_str().unwrap(),
        "--row-format",
        "jsonl",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    let mut count = 0;
    for line in body.lines() {
        let row: serde_json::Value = serde_json::from_str(line).expect("JSON line");
        assert_eq!(row["set"]["n"], 4);
        assert_eq!(row["exact_integral"], row["oracle_integral"]);
        count += 1;
    }
    assert_eq!(count, 4 * 15);
}

#[test]
fn census_respects_the_cap() {
    let out = dncayley(&["census", "--n", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn atoms_table_and_decompositions() {
    let out = dncayley(&["atoms", "--n", "12", "--format", "json"]);
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["atoms"].as_array().unwrap().len(), 6);

    let out = dncayley(&["atoms", "--set", "n=9; s1=; s2=0,3"]);
    let text = stdout(&out);
    assert!(text.contains("S2^2 = 2*[a^9] + 1*[a^3]"), "{text}");

    let out = dncayley(&["atoms"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_exports_dot_and_certificates() {
    let out = dncayley(&["oracle", "--set", "n=3; s1=1,2; s2=", "--format", "dot"]);
    let dot = stdout(&out);
    assert!(dot.starts_with("graph cayley {"), "{dot}");
    assert!(dot.contains("\"a^1\" -- \"a^2\""), "{dot}");

    let out = dncayley(&["oracle", "--set", "n=7; s1=; s2=1,2,4", "--format", "json"]);
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["integral"], false);
    assert_eq!(
        payload["surviving_factor"].as_array().unwrap()[0],
        serde_json::json!("1")
    );
    assert_eq!(payload["numeric_eigenvalues"].as_array().unwrap().len(), 14);
}

#[test]
fn check_classify_reports_the_coset_form() {
    let out = dncayley(&[
        "check",
        "--set",
        "n=9; s1=; s2=0,3",
        "--classify",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["classification"]["form"]["shape"], "punctured");
    assert_eq!(payload["classification"]["form"]["p"], 3);
    assert_eq!(payload["classification"]["form"]["k"], 2);

    // Classification is meaningless over even n: usage error.
    let out = dncayley(&["check", "--set", "n=6; s1=; s2=0,2", "--classify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_numeric_prints_advisory_rows() {
    let out = dncayley(&["check", "--set", "n=7; s1=; s2=1,2,4", "--numeric"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("numeric advisory"), "{text}");
    assert!(text.contains("not a square"), "{text}");
}

#[test]
fn file_and_inline_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.json");
    std::fs::write(&path, r#"{"n":6,"s1":[3],"s2":[0,2,4]}"#).unwrap();
    let from_file = dncayley(&["check", "--file", path.to_str().unwrap(), "--format", "json"]);
    let inline = dncayley(&["check", "--set", "n=6; s1=3; s2=0,2,4", "--format", "json"]);
    assert_eq!(stdout(&from_file), stdout(&inline));

    // Rejected: a reflection-free JSON set with an invalid S₁.
    std::fs::write(&path, r#"{"n":6,"s1":[1],"s2":[]}"#).unwrap();
    let out = dncayley(&["check", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(Path::new(&path).exists());
}
