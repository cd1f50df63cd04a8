//! Drives the command-line layer in-process and reads the JSON report back.

use gmqaoa::cli::{execute, AnalysisReport, Cli, Verdict};
use clap::Parser;

pub fn run_example() -> Result<AnalysisReport, String> {
    let graph = concat!(env!("CARGO_MANIFEST_DIR"), "/data/p4.graph");
    let cli = Cli::try_parse_from(["gmqaoa", "verify", "--maxcut", graph]).map_err(|e| e.to_string())?;
    let outcome = execute(&cli).map_err(|e| e.message().to_string())?;
    let report: AnalysisReport = serde_json::from_str(&outcome.body).map_err(|e| e.to_string())?;
    let oracle = report.oracle.as_ref().ok_or("verify always fills the oracle section")?;
    for c in &oracle.checks {
        println!("{:<22} {:<9} predicted {:?} observed {:?}", c.name, c.verdict.as_str(), c.predicted, c.observed);
    }
    println!("input sha256 {}", report.provenance.inputs[0].sha256);
    assert!(oracle.checks.iter().all(|c| c.verdict == Verdict::Match));
    assert_eq!(outcome.exit_code, 0);
    Ok(report)
}

#[allow(dead_code)]
fn main() -> Result<(), String> {
    run_example().map(|_| ())
}
