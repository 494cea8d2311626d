use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vanderfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vanderfit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn det_reports_both_routes() {
    let out = vanderfit(&["det", "--nodes", "-1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["det_product"], "2");
    assert_eq!(v["det_elimination"], "-2");
    assert_eq!(v["sign_relation"], -1);
    assert_eq!(v["agree"], true);
}

#[test]
fn det_of_disordered_nodes_names_the_pair() {
    let out = vanderfit(&["det", "--nodes", "0,1/2,1/3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1/2") && err.contains("1/3"), "{err}");
}

#[test]
fn fit_reads_csv_and_checks_degree() {
    let dir = tempfile::tempdir().unwrap();
    let ex24 = write(dir.path(), "ex24.csv", "x,y\n-1,3\n-1/3,163/81\n1/3,163/81\n1,3\n");
    let out = vanderfit(&["fit", &ex24, "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["coefficients"], serde_json::json!(["0", "10/9", "0", "17/9"]));
    assert_eq!(v["node_exact"], true);

    assert_eq!(vanderfit(&["fit", &ex24, "--degree", "4"]).status.code(), Some(2));

    let single = write(dir.path(), "one.csv", "x,y\n5,7/2\n");
    let v = json(&vanderfit(&["fit", &single]));
    assert_eq!(v["coefficients"], serde_json::json!(["7/2"]));

    let bad = write(dir.path(), "bad.csv", "x,y\n0,1\n# comment\n1,2\n2,oops\n");
    let out = vanderfit(&["fit", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));
}

#[test]
fn float_fit_reports_residual() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.csv", "x,y\n0,0\n0.5,0.25\n1,1\n");
    let v = json(&vanderfit(&["--backend", "float", "fit", &path]));
    assert_eq!(v["backend"], "float");
    assert_eq!(v["effective_degree"], 2);
    assert_eq!(v["node_exact"], true);
}

#[test]
fn converge_writes_profiles_and_lists_the_registry() {
    let dir = tempfile::tempdir().unwrap();
    let plots = dir.path().join("plots");
    let out = vanderfit(&["--probes", "100", "converge", "abs", "--plot-dir", plots.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    for k in 0..4 {
        let body = std::fs::read_to_string(plots.join(format!("level_{k}.csv"))).unwrap();
        assert!(body.starts_with("x,error\n"));
        assert_eq!(body.lines().count(), 102);
    }
    let out = vanderfit(&["converge", "tanh"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("abs, sine, log1p, runge"));
}

#[test]
fn converge_csv_has_one_row_per_level() {
    let out = vanderfit(&["--format", "csv", "--probes", "50", "converge", "poly:1,0,2", "--max-level", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| &r[4] == "0.0"));
}

#[test]
fn taylor_flags_misprints_without_failing() {
    let out = vanderfit(&["taylor", "log1p"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tabulated"]["mismatches"], 2);
    assert_eq!(vanderfit(&["taylor", "sine", "--degrees", "3"]).status.code(), Some(2));
    assert_eq!(vanderfit(&["--backend", "exact", "taylor", "sine"]).status.code(), Some(2));
}

#[test]
fn examples_exit_zero_and_are_deterministic() {
    for id in ["2.3", "2.4", "2.5", "2.7", "2.8"] {
        let first = vanderfit(&["example", id]);
        assert_eq!(first.status.code(), Some(0), "example {id}");
        let second = vanderfit(&["example", id]);
        assert_eq!(first.stdout, second.stdout, "example {id}");
    }
    assert_eq!(vanderfit(&["example", "2.1"]).status.code(), Some(2));
}

#[test]
fn json_output_round_trips_byte_identically() {
    let runs: [&[&str]; 4] = [
        &["example", "2.5"],
        &["det", "--fixture", "ln-partition-6"],
        &["taylor", "sine"],
        &["--probes", "64", "converge", "runge"],
    ];
    for args in runs {
        let out = vanderfit(args);
        let v = json(&out);
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again.as_bytes(), &out.stdout[..], "{args:?}");
    }
}

#[test]
fn partition_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nodes.csv");
    let out = vanderfit(&["--format", "csv", "--out", target.to_str().unwrap(), "partition", "--dyadic", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), "x\n0\n1/4\n1/2\n3/4\n1\n");
    let det = vanderfit(&["det", "--file", target.to_str().unwrap()]);
    assert_eq!(json(&det)["agree"], true);
    assert_eq!(vanderfit(&["--backend", "exact", "partition", "--fixture", "pi-partition-6"]).status.code(), Some(2));
}
