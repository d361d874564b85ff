//! End-to-end tests of the `faultloc` binary: output shapes, exit codes,
//! and determinism, driven against the shipped `middle` fixture.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn faultloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faultloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> &str {
    std::str::from_utf8(&output.stdout).expect("stdout is utf-8")
}

fn stderr_of(output: &Output) -> &str {
    std::str::from_utf8(&output.stderr).expect("stderr is utf-8")
}

fn code_of(output: &Output) -> i32 {
    output.status.code().expect("process exits normally")
}

fn json_of(output: &Output) -> serde_json::Value {
    serde_json::from_str(stdout_of(output)).expect("stdout is json")
}

#[test]
fn tarantula_tsv_ranks_the_faulty_line_first() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "tarantula",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.starts_with("rank\tunit\tline\tscore\n1\tmiddle.c\t8\t0.833333\n"));
    assert_eq!(text.lines().count(), 13);
    assert!(!text.contains("# score"));
}

#[test]
fn faulty_flag_appends_effectiveness() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "tarantula",
        "--faulty",
        "middle.c:8",
    ]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).ends_with("# inspected: 1\n# score: 0.916667\n"));
}

#[test]
fn slice_ranking_as_json() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--graph",
        &fixture("middle.dot"),
        "--criterion",
        "middle.c:15",
        "--technique",
        "slice",
        "--faulty",
        "middle.c:8",
        "--format",
        "json",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);
    assert_eq!(doc["technique"], "slice");
    assert_eq!(doc["policy"], "modified_competition");
    assert_eq!(doc["symptom"], "middle.c:15");
    assert_eq!(doc["universe"], 12);
    assert_eq!(doc["entries"][0]["rank"], 1);
    assert_eq!(doc["entries"][0]["line"], 15);
    assert_eq!(doc["entries"][0]["score"], serde_json::Value::Null);
    assert_eq!(doc["entries"][1]["rank"], 2);
    assert_eq!(doc["entries"][2]["rank"], 2);
    assert_eq!(doc["effectiveness"]["inspected"], 1);
    let score = doc["effectiveness"]["score"].as_f64().unwrap();
    assert!((score - (1.0 - 1.0 / 12.0)).abs() < 1e-12);
}

#[test]
fn hybrid_flags_resolve_into_the_label() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--graph",
        &fixture("middle.dot"),
        "--criterion",
        "middle.c:15",
        "--technique",
        "hybrid",
        "--n",
        "2",
        "--formula",
        "tarantula",
        "--faulty",
        "middle.c:8",
        "--format",
        "json",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);
    assert_eq!(doc["technique"], "hybrid:n=2:formula=tarantula");
    assert_eq!(doc["entries"][0]["line"], 8);
    assert_eq!(
        doc["entries"][0]["score"].as_f64().unwrap(),
        0.8333333333333334
    );
    assert_eq!(doc["effectiveness"]["inspected"], 1);
}

#[test]
fn inline_hybrid_parameters_work() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--graph",
        &fixture("middle.dot"),
        "--criterion",
        "middle.c:15",
        "--technique",
        "hybrid:n=0:formula=ochiai",
        "--format",
        "json",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);
    assert_eq!(doc["technique"], "hybrid:n=0:formula=ochiai");
    // With an empty head the hybrid order is the pure slice order.
    assert_eq!(doc["entries"][0]["line"], 15);
    assert_eq!(doc["entries"][0]["rank"], 1);
    assert_eq!(doc["entries"][1]["rank"], 2);
    assert_eq!(doc["entries"][2]["rank"], 2);
}

#[test]
fn missing_spectrum_file_exits_2() {
    let out = faultloc(&["localize", "--spectrum", &fixture("no-such-file.spectrum")]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).starts_with("error: cannot access"));
}

#[test]
fn malformed_spectrum_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.spectrum");
    std::fs::write(&path, "statements a.c:1\ntest t1 OOPS a.c:1\n").unwrap();
    let out = faultloc(&["localize", "--spectrum", &path.display().to_string()]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("parse error at line 2"));
}

#[test]
fn dangling_graph_edge_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dot");
    std::fs::write(
        &path,
        "digraph dependence {\n  \"middle.c:15\";\n  \"middle.c:15\" -> \"middle.c:3\" [kind=\"data\"];\n}\n",
    )
    .unwrap();
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--graph",
        &path.display().to_string(),
        "--criterion",
        "middle.c:15",
        "--technique",
        "slice",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("dangling edge endpoint"));
}

#[test]
fn unknown_technique_exits_2() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "sorcery",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("unknown technique `sorcery`"));
}

#[test]
fn conflicting_formula_flags_exit_2() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "tarantula",
        "--formula",
        "ochiai",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("--technique names formula `tarantula`"));
}

#[test]
fn agreeing_formula_flag_is_accepted() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "tarantula",
        "--formula",
        "tarantula",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
}

#[test]
fn unavailable_formula_exits_3() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "m9185",
    ]);
    assert_eq!(code_of(&out), 3);
    assert!(stderr_of(&out).contains("registered but its definition is unavailable"));
}

#[test]
fn slice_without_graph_exits_2() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "slice",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("pass --graph"));
}

#[test]
fn criterion_not_executed_exits_2() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--graph",
        &fixture("middle.dot"),
        "--criterion",
        "middle.c:13",
        "--technique",
        "slice",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("was not executed by the failing run"));
}

#[test]
fn faulty_outside_the_ranked_universe_exits_2() {
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "tarantula",
        "--faulty",
        "middle.c:99",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("no faulty statement lies in the ranked universe"));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ranking.tsv");
    let out = faultloc(&[
        "localize",
        "--spectrum",
        &fixture("middle.spectrum"),
        "--technique",
        "tarantula",
        "--out",
        &path.display().to_string(),
    ]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("rank\tunit\tline\tscore\n"));
}

#[test]
fn evaluate_emits_identical_reports_across_runs() {
    let args = ["evaluate", &fixture("middle.manifest.json")];
    let first = faultloc(&args);
    let second = faultloc(&args);
    assert_eq!(code_of(&first), 0, "stderr: {}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);

    let doc = json_of(&first);
    assert_eq!(
        doc["techniques"],
        serde_json::json!(["tarantula", "slice", "hybrid:n=2:formula=tarantula"])
    );
    let cases = doc["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 3);
    for case in cases {
        assert_eq!(case["bug"], "middle-v1");
        assert_eq!(case["status"], "ok");
        assert_eq!(case["inspected"], 1);
        let score = case["score"].as_f64().unwrap();
        assert!((score - (1.0 - 1.0 / 12.0)).abs() < 1e-12);
    }
    assert!(
        doc["aggregate"]["overall"]["comparisons"]
            .as_array()
            .unwrap()
            .len()
            == 3
    );
}

#[test]
fn evaluate_technique_flag_replaces_the_manifest_list() {
    let out = faultloc(&[
        "evaluate",
        &fixture("middle.manifest.json"),
        "--technique",
        "ochiai",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);
    assert_eq!(doc["techniques"], serde_json::json!(["ochiai"]));
    assert_eq!(doc["cases"].as_array().unwrap().len(), 1);
    assert_eq!(doc["cases"][0]["status"], "ok");
}

#[test]
fn evaluate_records_unavailable_formulas_as_case_failures() {
    let out = faultloc(&[
        "evaluate",
        &fixture("middle.manifest.json"),
        "--technique",
        "m9185",
        "--technique",
        "tarantula",
    ]);
    // Per-case failures are data, not fatal errors.
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);
    let cases = doc["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    assert_eq!(cases[0]["technique"], "m9185");
    assert_eq!(cases[0]["status"], "failed");
    assert!(cases[0]["error"].as_str().unwrap().contains("unavailable"));
    assert_eq!(cases[1]["technique"], "tarantula");
    assert_eq!(cases[1]["status"], "ok");
}

#[test]
fn evaluate_unreadable_manifest_exits_2() {
    let out = faultloc(&["evaluate", &fixture("no-such-manifest.json")]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).starts_with("error: cannot access"));
}

#[test]
fn evaluate_empty_technique_list_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixtures().join("middle.manifest.json")).unwrap(),
    )
    .unwrap();
    doc["techniques"] = serde_json::json!([]);
    let path = dir.path().join("empty.manifest.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = faultloc(&["evaluate", &path.display().to_string()]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("manifest lists no techniques"));
}

#[test]
fn evaluate_tsv_mirror() {
    let out = faultloc(&[
        "evaluate",
        &fixture("middle.manifest.json"),
        "--format",
        "tsv",
    ]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.starts_with("# cases\n"));
    assert!(text.contains("middle-v1\ttarantula\tok\t1\t12\t0.916667\t8.33\t0.916667"));
    assert!(text.contains("# techniques: overall"));
    assert!(text.contains("# comparisons: error_type=ARTIFICIAL"));
    assert!(text.contains("# cumulative_frequency: fault_count=1"));
}

#[test]
fn compare_reports_tied_techniques() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = faultloc(&[
        "evaluate",
        &fixture("middle.manifest.json"),
        "--out",
        &report.display().to_string(),
    ]);
    assert_eq!(code_of(&out), 0);

    let out = faultloc(&[
        "compare",
        &report.display().to_string(),
        "tarantula",
        "slice",
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let lines: Vec<&str> = stdout_of(&out).lines().collect();
    assert_eq!(
        lines[0],
        "technique_a\ttechnique_b\twins_a\twins_b\todds_ratio\tu\tp_value"
    );
    assert_eq!(
        lines[1],
        "tarantula\tslice\t0\t0\t1.000000\t0.500000\t1.000000"
    );
}

#[test]
fn compare_is_antisymmetric_on_an_uneven_report() {
    // `binary` scores every statement the failing test covered at 1, so six
    // statements tie ahead of the fault and the slice wins this case.
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("uneven.manifest.json");
    let doc = serde_json::json!({
        "techniques": ["binary", "slice"],
        "cases": [{
            "id": "middle-v1",
            "spectrum": fixture("middle.spectrum"),
            "graph": fixture("middle.dot"),
            "criterion": "middle.c:15",
            "faulty": [["middle.c:8"]],
            "error_type": "ARTIFICIAL",
            "fault_count": 1
        }]
    });
    std::fs::write(&manifest, serde_json::to_string(&doc).unwrap()).unwrap();
    let report = dir.path().join("report.json");
    let out = faultloc(&[
        "evaluate",
        &manifest.display().to_string(),
        "--out",
        &report.display().to_string(),
    ]);
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));

    let forward = faultloc(&[
        "compare",
        &report.display().to_string(),
        "binary",
        "slice",
        "--format",
        "json",
    ]);
    let backward = faultloc(&[
        "compare",
        &report.display().to_string(),
        "slice",
        "binary",
        "--format",
        "json",
    ]);
    assert_eq!(code_of(&forward), 0);
    assert_eq!(code_of(&backward), 0);
    let fwd = json_of(&forward);
    let bwd = json_of(&backward);
    assert_eq!(fwd["wins_a"], 0);
    assert_eq!(fwd["wins_b"], 1);
    assert_eq!(bwd["wins_a"], 1);
    assert_eq!(bwd["wins_b"], 0);
    let psi_ab = fwd["odds_ratio"].as_f64().unwrap();
    let psi_ba = bwd["odds_ratio"].as_f64().unwrap();
    assert!((psi_ba - 9.0).abs() < 1e-12);
    assert!((psi_ab * psi_ba - 1.0).abs() < 1e-12);
}

#[test]
fn compare_unknown_label_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = faultloc(&[
        "evaluate",
        &fixture("middle.manifest.json"),
        "--out",
        &report.display().to_string(),
    ]);
    assert_eq!(code_of(&out), 0);

    let out = faultloc(&[
        "compare",
        &report.display().to_string(),
        "tarantula",
        "dstar2",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("`dstar2` is not in the report"));
}

#[test]
fn formats_prints_the_reference() {
    let out = faultloc(&["formats"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    for heading in [
        "COVERAGE SPECTRUM",
        "DEPENDENCE GRAPH",
        "CORPUS MANIFEST",
        "RANKING OUTPUT",
        "EVALUATION REPORT",
        "digraph dependence",
    ] {
        assert!(text.contains(heading), "missing `{heading}`");
    }
}

#[test]
fn missing_subcommand_exits_2() {
    let out = faultloc(&[]);
    assert_eq!(code_of(&out), 2);
}
