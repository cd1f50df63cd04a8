use std::process::{Command, Output};

use gmqaoa::cli::{AnalysisReport, SimulationReport, Verdict, SWEEP_HEADER};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmqaoa")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["verify", "--maxcut", &data("p3.graph")]), 0);
    assert_eq!(code(&["analyze", "--maxcut", &data("malformed.graph")]), 2);
    assert_eq!(code(&["analyze", "--maxcut", &data("missing.graph")]), 2);
    assert_eq!(code(&["verify", "--maxcut", &data("p10.graph")]), 3);
    assert_eq!(code(&["simulate", "--maxcut", &data("p3.graph"), "--samples", "1"]), 2);
    assert_eq!(code(&["sweep", "--maxcut", &data("p3.graph"), "--depths", ""]), 2);
    assert_eq!(code(&["analyze", "--coloring", &data("k3.graph")]), 2);
    assert_eq!(
        code(&["verify", "--table", &data("two_level_table.json"), "--init", &data("sum_zero_state.json")]),
        1
    );
}

#[test]
fn analyze_reports() {
    let p4: AnalysisReport = serde_json::from_str(&stdout(&["analyze", "--maxcut", &data("p4.graph")])).unwrap();
    assert_eq!(p4.dla.dim, 17);
    assert!((p4.loss.loss_variance - 0.25).abs() < 1e-12);
    assert!(p4.oracle.is_none());

    let house: AnalysisReport = serde_json::from_str(&stdout(&["analyze", "--maxcut", &data("house.graph")])).unwrap();
    assert_eq!((house.d, house.dla.dim, house.commutant.dim), (5, 26, 206));

    let back: AnalysisReport = serde_json::from_str(&serde_json::to_string(&house).unwrap()).unwrap();
    assert_eq!(back, house);
}

#[test]
fn analyze_csv() {
    let csv = stdout(&["analyze", "--maxcut", &data("p3.graph"), "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "quantity,predicted,observed,tolerance,verdict");
}

#[test]
fn verify_basis_state() {
    let body = stdout(&["verify", "--maxcut", &data("p3.graph"), "--init", &data("p3_basis_state.json")]);
    let r: AnalysisReport = serde_json::from_str(&body).unwrap();
    let oracle = r.oracle.unwrap();
    assert_eq!(oracle.commutant_dim, Some(22));
    for c in &oracle.checks {
        // d = 1 has no matrix units to build
        let want = if c.name == "matrix_units" { Verdict::NotRun } else { Verdict::Match };
        assert_eq!(c.verdict, want, "{}", c.name);
    }
}

#[test]
fn verify_x_mixer() {
    let body = stdout(&["verify", "--maxcut", &data("house.graph"), "--mixer", "x"]);
    let oracle = serde_json::from_str::<AnalysisReport>(&body).unwrap().oracle.unwrap();
    assert_eq!(oracle.closure.dimension, 248);
    let dla = oracle.checks.iter().find(|c| c.name == "dla_dim").unwrap();
    assert_eq!(dla.verdict, Verdict::NotRun);
}

#[test]
fn verify_other_problem_kinds() {
    assert_eq!(code(&["verify", "--cnf", &data("sample.cnf")]), 0);
    assert_eq!(code(&["verify", "--coloring", &data("k3.graph"), "--colors", "2"]), 0);
    assert_eq!(code(&["verify", "--table", &data("sample_table.json")]), 0);
    assert_eq!(code(&["verify", "--maxcut", &data("p4.graph"), "--threshold", "2"]), 0);
}

#[test]
fn simulate_round_trip() {
    let args = ["simulate", "--maxcut", &data("p3.graph"), "--depth", "4", "--samples", "256", "--seed", "3"];
    let body = stdout(&args);
    let r: SimulationReport = serde_json::from_str(&body).unwrap();
    assert_eq!(r.runs.len(), 1);
    assert_eq!(r.runs[0].estimate.samples, 256);
    assert_eq!(serde_json::to_string_pretty(&r).unwrap().trim_end(), body.trim_end());
    assert_eq!(stdout(&args), body);
}

#[test]
fn sweep_csv() {
    let csv = stdout(&["sweep", "--maxcut", &data("p3.graph"), "--depths", "1,2,4", "--samples", "64"]);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, SWEEP_HEADER);
    let depths: Vec<String> = rdr.records().map(|r| r.unwrap()[0].to_string()).collect();
    assert_eq!(depths, ["1", "2", "4"]);
}

#[test]
fn out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["analyze", "--maxcut", &data("p3.graph"), "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: AnalysisReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.dla.dim, 10);
    // the destination is not part of the report
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["analyze", "--maxcut", &data("p3.graph")]));
}
