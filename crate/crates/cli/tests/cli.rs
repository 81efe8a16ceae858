//! End-to-end tests of the `forge` binary: exit-code contract, report
//! determinism, pinned CSV layouts, and the cost-cap environment override.

use std::io::Write;
use std::process::{Command, Output};

use forge_cli::{load_report, ExperimentReport};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(args)
        .env_remove("FORGE_MAX_COST")
        .output()
        .expect("binary runs")
}

fn parse_stdout(output: &Output) -> ExperimentReport {
    load_report(&output.stdout).expect("stdout is a report")
}

#[test]
fn census_reports_are_byte_identical_across_runs() {
    let args = [
        "census", "--universe", "5", "--n", "3", "--m", "2", "--ell", "4", "--k", "1", "--seed",
        "7",
    ];
    let first = forge(&args);
    let second = forge(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let report = parse_stdout(&first);
    assert_eq!(report.counters["total"], serde_json::json!("1024"));
    assert!(report.verdicts["bound_holds"]);

    // Sampling mode is deterministic per seed too.
    let sampled = [
        "census", "--universe", "6", "--n", "3", "--m", "2", "--ell", "4", "--k", "1", "--seed",
        "3", "--sample", "64",
    ];
    let first = forge(&sampled);
    let second = forge(&sampled);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn pestov_reports_the_crossing_stage() {
    let output = forge(&["pestov", "--class", "set", "--n", "2", "--k", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_stdout(&output);
    assert_eq!(report.counters["N"], serde_json::json!(4));
    assert_eq!(report.counters["minimal_bound"], serde_json::json!("384"));
    assert_eq!(report.counters["dense_bound"], serde_json::json!("4096"));

    // CSV layout is pinned.
    let output = forge(&[
        "pestov", "--class", "set", "--n", "2", "--k", "1", "--format", "csv",
    ]);
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "class,m,n,k,N,minimal_bound,dense_bound,crossing_flag"
    );
    assert_eq!(lines.next().unwrap(), "set,2,2,1,4,384,4096,true");
}

#[test]
fn extend_pentagon_is_verified() {
    let output = forge(&[
        "extend",
        "--class",
        "krfree:3",
        "--host",
        "c5",
        "--template",
        "path3",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_stdout(&output);
    assert_eq!(report.counters["extended_size"], serde_json::json!(11));
    assert!(report.verdicts["verified"]);
}

#[test]
fn verification_failures_exit_one_with_witness() {
    // Ordered pairs are not a Ramsey object.
    let output = forge(&[
        "patterns",
        "ramsey-object",
        "--a",
        "set:2",
        "--b",
        "set:2",
        "--c",
        "set:4",
        "-r",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let report = parse_stdout(&output);
    assert!(!report.verdicts["ramsey"]);
    assert!(report.witnesses.contains_key("bad_coloring"));

    // A 5-point host admits a triangle-free partition.
    let output = forge(&["thick", "ramsey", "--target", "3", "--host", "5"]);
    assert_eq!(output.status.code(), Some(1));
    let report = parse_stdout(&output);
    assert!(report.witnesses.contains_key("second_cell"));
}

#[test]
fn invalid_inputs_exit_two() {
    // Unknown flag: usage error from the parser.
    let output = forge(&["pestov", "--class", "set", "--n", "2", "--wat", "1"]);
    assert_eq!(output.status.code(), Some(2));

    // Constraint violation in a structure file, naming the clique.
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"flavor":"krfree","r":3,"n":3,"edges":[[0,1],[0,2],[1,2]]}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let output = forge(&["emb", "list", "--source", "edge", "--target", path]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("[0, 1, 2]"), "stderr was: {stderr}");

    // Duplicate edges are rejected and reported.
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"flavor":"graph","n":3,"edges":[[0,1],[0,1]]}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let output = forge(&["emb", "list", "--source", "edge", "--target", path]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("duplicate"), "stderr was: {stderr}");

    // Cost-cap refusals also exit 2.
    let output = forge(&["thick", "ramsey", "--target", "3", "--host", "9"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("cost cap"), "stderr was: {stderr}");
}

#[test]
fn max_cost_env_overrides_caps() {
    let args = ["closure", "closed", "--universe", "7", "--n", "3", "--m", "2"];
    // 2^21 generator families exceed the stock cap.
    let refused = forge(&args);
    assert_eq!(refused.status.code(), Some(2));

    let allowed = Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(args)
        .env("FORGE_MAX_COST", "4194304")
        .output()
        .unwrap();
    assert_eq!(allowed.status.code(), Some(0));
    let report = load_report(&allowed.stdout).unwrap();
    assert!(report.counters["count"].as_u64().unwrap() > 0);
}

#[test]
fn structure_emitted_by_reports_loads_back() {
    let output = forge(&[
        "extend",
        "--class",
        "graph",
        "--host",
        "k3",
        "--template",
        "path3",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_stdout(&output);
    let structure = &report.witnesses["extension"]["structure"];
    let parsed: forge_core::FiniteStructure =
        serde_json::from_value(structure.clone()).unwrap();
    assert_eq!(parsed.size(), 9);
}

#[test]
fn out_flag_writes_csv_with_pinned_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.csv");
    let output = forge(&[
        "census",
        "--universe",
        "4",
        "--n",
        "2",
        "--m",
        "1",
        "--ell",
        "3",
        "--k",
        "1",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(
        "universe,n,m,ell,k,total,near_closed,closed_count,clique_free_count,bound_lhs,bound_rhs"
    ));
}
