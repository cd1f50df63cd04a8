//! Command-line front end: `analyze`, `verify`, `simulate`, `sweep`.
//!
//! Exit codes: 0 when every verdict matches (or nothing was checked),
//! 1 when `verify` finds a prediction that disagrees with the oracle,
//! 2 for unreadable or invalid input, 3 when the instance exceeds a size cap.
//!
//! Reports carry the tool version, the resolved configuration and SHA-256
//! digests of every input file. Thread count and output destination are
//! deliberately left out so that a report's bytes depend only on its inputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analytic::{
    isotypic_summary, predict_commutant, predict_dla, predict_loss_stats, restricted_generators, CommutantPrediction,
    DlaPrediction, LossStatsPrediction,
};
use crate::error::Error;
use crate::oracle::{
    commutant_dimension, complement_lines, eigenline_residual, extract_matrix_units, gm_generators,
    invariant_subspace_residual, lie_closure, w0_basis, x_mixer_generators, ClosureOptions, ClosureReport,
    ClosureStrategy, CMatrix, DEFAULT_ORACLE_CAP, DEFAULT_TOL_RANK,
};
use crate::problems::{
    coloring_objective, cnf_objective, maxcut_objective, parse_cnf, parse_custom_table, parse_graph,
    parse_initial_state, threshold_transform,
};
use crate::sim::{depth_sweep, monte_carlo_stats, McReport, DEFAULT_DEPTH, DEFAULT_SAMPLES};
use crate::spectrum::{
    build_spectrum, decompose_initial_state, uniform_state_with_limit, InitialState, LevelOverlaps, ObjectiveTable,
    Spectrum, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO,
};

/// Column order of the sweep CSV (also used for `simulate --format csv`).
pub const SWEEP_HEADER: [&str; 13] = [
    "p",
    "samples",
    "seed",
    "mean",
    "variance",
    "stderr_mean",
    "stderr_variance",
    "target_variance",
    "target_expected_loss",
    "target_zeta_mean",
    "variance_verdict",
    "expected_loss_verdict",
    "zeta_mean_verdict",
];

#[derive(Parser, Debug)]
#[command(name = "gmqaoa", version, about = "Lie-algebraic predictions and numerical checks for Grover-mixer QAOA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the closed-form predictions for an instance.
    Analyze(AnalyzeArgs),
    /// Compare the predictions with the dense Lie-closure and commutant oracles.
    Verify(VerifyArgs),
    /// Monte Carlo estimate of the loss mean and variance at one depth.
    Simulate(SimulateArgs),
    /// Monte Carlo estimates over a list of depths.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("problem").required(true).args(["maxcut", "cnf", "coloring", "table"])))]
pub struct ProblemArgs {
    /// MaxCut on an edge-list graph.
    #[arg(long, value_name = "FILE")]
    pub maxcut: Option<PathBuf>,
    /// Number of clauses of a DIMACS CNF formula that an assignment violates.
    #[arg(long, value_name = "FILE")]
    pub cnf: Option<PathBuf>,
    /// Monochromatic edges of a q-colored graph; needs `--colors`.
    #[arg(long, value_name = "FILE", requires = "colors")]
    pub coloring: Option<PathBuf>,
    #[arg(long, value_name = "Q")]
    pub colors: Option<usize>,
    /// JSON objective table `{"q", "n", "values"}`.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
    /// `uniform` or a JSON amplitude file.
    #[arg(long, default_value = "uniform", value_name = "uniform|FILE")]
    pub init: String,
    /// Replace F by the indicator of `F >= t`.
    #[arg(long, value_name = "T")]
    pub threshold: Option<f64>,
    /// Use `F > t` instead of `F >= t` with `--threshold`.
    #[arg(long, requires = "threshold")]
    pub strict_threshold: bool,
    #[arg(long, default_value_t = DEFAULT_TOL_ZERO)]
    pub tol_zero: f64,
    /// Largest dense table accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mixer {
    Grover,
    X,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyArg {
    Generators,
    AllPairs,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = Mixer::Grover)]
    pub mixer: Mixer,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_indep: f64,
    #[arg(long, default_value_t = DEFAULT_TOL_RANK)]
    pub tol_rank: f64,
    /// Threshold for the invariant-subspace and matrix-unit residuals.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_residual: f64,
    #[arg(long, default_value_t = 4096)]
    pub dim_cap: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Generators)]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct McArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Verdict band in standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated depths, e.g. `1,2,4,8`.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub depths: Vec<usize>,
    #[command(flatten)]
    pub mc: McArgs,
    /// Sweep output defaults to CSV.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// report types

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Mismatch,
    NotRun,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Match
        } else {
            Verdict::Mismatch
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::NotRun => "not_run",
        }
    }
}

/// One predicted-versus-observed comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub predicted: Option<f64>,
    pub observed: Option<f64>,
    /// Allowed `|predicted - observed|`; for residual checks, the bound on `observed`.
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Every flag that influences the report body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub problem_kind: String,
    pub problem_path: String,
    pub colors: Option<usize>,
    pub init: String,
    pub threshold: Option<f64>,
    pub strict_threshold: bool,
    pub tol_zero: f64,
    pub max_dim: usize,
    pub format: Format,
    pub mixer: Option<Mixer>,
    pub tol_indep: Option<f64>,
    pub tol_rank: Option<f64>,
    pub tol_residual: Option<f64>,
    pub dim_cap: Option<usize>,
    pub strategy: Option<ClosureStrategy>,
    pub depth: Option<usize>,
    pub depths: Option<Vec<usize>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub sigmas: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ResolvedConfig,
    pub inputs: Vec<InputDigest>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemDescriptor {
    pub kind: String,
    pub n: usize,
    pub q: usize,
    pub dim: usize,
    pub min_value: f64,
    pub max_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub r: usize,
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapSummary {
    /// One coefficient per level, zero where unsupported.
    pub c: Vec<f64>,
    pub supported_levels: Vec<usize>,
    pub global_phase: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotypicSummary {
    pub w0_dim: usize,
    pub complement_lines: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub mixer: Mixer,
    pub closure: ClosureReport,
    pub commutant_dim: Option<usize>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub provenance: Provenance,
    pub problem: ProblemDescriptor,
    pub spectrum: SpectrumSummary,
    pub overlaps: OverlapSummary,
    pub d: usize,
    pub dla: DlaPrediction,
    pub commutant: CommutantPrediction,
    pub loss: LossStatsPrediction,
    pub isotypic: IsotypicSummary,
    pub oracle: Option<OracleSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossTargets {
    pub loss_variance: f64,
    /// The stated deep-circuit mean; absent unless the center is two-dimensional.
    pub expected_loss: Option<f64>,
    /// Mean of the uniform distribution on the supported values.
    pub zeta_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationEntry {
    pub estimate: McReport,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub provenance: Provenance,
    pub problem: ProblemDescriptor,
    pub targets: LossTargets,
    pub runs: Vec<SimulationEntry>,
}

// ---------------------------------------------------------------------------
// errors and exit codes

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleCap { .. } | Error::SizeLimit { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// A finished command: the serialized report and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub exit_code: u8,
    pub out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// problem loading

struct Loaded {
    objective: ObjectiveTable,
    state: InitialState,
    spectrum: Spectrum,
    overlaps: LevelOverlaps,
    inputs: Vec<InputDigest>,
    kind: String,
    path: String,
}

fn read_input(path: &Path, role: &str, inputs: &mut Vec<InputDigest>) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    inputs.push(InputDigest {
        role: role.into(),
        path: path.display().to_string(),
        bytes: bytes.len() as u64,
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    String::from_utf8(bytes).map_err(|_| input_err(format!("{}: not valid UTF-8", path.display())))
}

fn with_path(path: &Path, e: Error) -> CliError {
    match CliError::from(e) {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        cap => cap,
    }
}

fn load(args: &ProblemArgs) -> Result<Loaded, CliError> {
    if !(args.tol_zero >= 0.0) {
        return Err(input_err("--tol-zero must be non-negative"));
    }
    let mut inputs = Vec::new();
    let (kind, path, objective) = if let Some(p) = &args.maxcut {
        let text = read_input(p, "problem", &mut inputs)?;
        let g = parse_graph(&text).map_err(|e| with_path(p, e))?;
        ("maxcut", p, maxcut_objective(&g, args.max_dim)?)
    } else if let Some(p) = &args.cnf {
        let text = read_input(p, "problem", &mut inputs)?;
        let f = parse_cnf(&text).map_err(|e| with_path(p, e))?;
        ("cnf", p, cnf_objective(&f, args.max_dim)?)
    } else if let Some(p) = &args.coloring {
        let q = args.colors.ok_or_else(|| input_err("--coloring needs --colors"))?;
        let text = read_input(p, "problem", &mut inputs)?;
        let g = parse_graph(&text).map_err(|e| with_path(p, e))?;
        ("coloring", p, coloring_objective(&g, q, args.max_dim)?)
    } else if let Some(p) = &args.table {
        let text = read_input(p, "problem", &mut inputs)?;
        let t = parse_custom_table(&text).map_err(|e| with_path(p, e))?;
        crate::spectrum::dense_dim(t.n(), t.q(), args.max_dim)?;
        ("table", p, t)
    } else {
        return Err(input_err("one of --maxcut, --cnf, --coloring, --table is required"));
    };
    let objective = match args.threshold {
        Some(t) if !t.is_finite() => return Err(input_err("--threshold must be finite")),
        Some(t) => threshold_transform(&objective, t, args.strict_threshold),
        None => objective,
    };
    let state = if args.init == "uniform" {
        uniform_state_with_limit(objective.n(), objective.q(), args.max_dim)?
    } else {
        let p = Path::new(&args.init);
        let text = read_input(p, "init", &mut inputs)?;
        let s = parse_initial_state(&text).map_err(|e| with_path(p, e))?;
        if s.dim() != objective.dim() {
            return Err(input_err(format!(
                "{}: initial state has {} amplitudes, the objective needs {}",
                p.display(),
                s.dim(),
                objective.dim()
            )));
        }
        s
    };
    let spectrum = build_spectrum(&objective);
    let overlaps = decompose_initial_state(&state, &spectrum, args.tol_zero)?;
    Ok(Loaded {
        objective,
        state,
        spectrum,
        overlaps,
        inputs,
        kind: kind.into(),
        path: path.display().to_string(),
    })
}

fn base_config(args: &ProblemArgs, loaded: &Loaded, format: Format) -> ResolvedConfig {
    ResolvedConfig {
        problem_kind: loaded.kind.clone(),
        problem_path: loaded.path.clone(),
        colors: args.colors,
        init: args.init.clone(),
        threshold: args.threshold,
        strict_threshold: args.strict_threshold,
        tol_zero: args.tol_zero,
        max_dim: args.max_dim,
        format,
        mixer: None,
        tol_indep: None,
        tol_rank: None,
        tol_residual: None,
        dim_cap: None,
        strategy: None,
        depth: None,
        depths: None,
        samples: None,
        seed: None,
        sigmas: None,
    }
}

fn provenance(command: &str, config: ResolvedConfig, inputs: Vec<InputDigest>) -> Provenance {
    Provenance {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config,
        inputs,
    }
}

fn describe(l: &Loaded) -> ProblemDescriptor {
    ProblemDescriptor {
        kind: l.kind.clone(),
        n: l.objective.n(),
        q: l.objective.q(),
        dim: l.objective.dim(),
        min_value: l.objective.min_value(),
        max_value: l.objective.max_value(),
    }
}

fn analysis(l: &Loaded, prov: Provenance, tol_zero: f64) -> AnalysisReport {
    let s = &l.spectrum;
    let o = &l.overlaps;
    let (w0_dim, complement) = isotypic_summary(s, o);
    AnalysisReport {
        provenance: prov,
        problem: describe(l),
        spectrum: SpectrumSummary {
            r: s.r(),
            values: s.values(),
            multiplicities: s.multiplicities(),
        },
        overlaps: OverlapSummary {
            c: o.c.clone(),
            supported_levels: o.supported_levels.clone(),
            global_phase: [o.global_phase.re, o.global_phase.im],
        },
        d: o.d,
        dla: predict_dla(s, o, tol_zero),
        commutant: predict_commutant(s, o),
        loss: predict_loss_stats(s, o, tol_zero),
        isotypic: IsotypicSummary {
            w0_dim,
            complement_lines: complement,
        },
        oracle: None,
    }
}

// ---------------------------------------------------------------------------
// commands

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| input_err(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| input_err(e.to_string());
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.write_record(r).map_err(wrap)?;
    }
    let bytes = w.into_inner().map_err(|e| input_err(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| input_err(e.to_string()))
}

// Debug formatting round-trips and switches to exponent notation for tiny values.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn analysis_rows(r: &AnalysisReport) -> Vec<Vec<String>> {
    let mut rows: Vec<(String, String)> = vec![
        ("n".into(), r.problem.n.to_string()),
        ("q".into(), r.problem.q.to_string()),
        ("r".into(), r.spectrum.r.to_string()),
        ("d".into(), r.d.to_string()),
        ("dla_dim".into(), r.dla.dim.to_string()),
        ("dla_algebra".into(), r.dla.algebra.to_string()),
        ("center_dim".into(), r.dla.center_dim.to_string()),
        ("sum_c".into(), num(r.dla.sum_c)),
        ("commutant_dim".into(), r.commutant.dim.to_string()),
        ("w0_dim".into(), r.isotypic.w0_dim.to_string()),
        ("complement_lines".into(), r.isotypic.complement_lines.to_string()),
        ("zeta_mean".into(), num(r.loss.zeta_mean)),
        ("zeta_var".into(), num(r.loss.zeta_var)),
        ("loss_variance".into(), num(r.loss.loss_variance)),
        ("expected_loss".into(), opt(r.loss.expected_loss)),
        ("p_su_rho".into(), num(r.loss.p_su_rho)),
        ("p_su_hp".into(), num(r.loss.p_su_hp)),
    ];
    if let Some(d) = r.dla.degenerate {
        rows.push(("degenerate_span_dim".into(), d.span_dim.to_string()));
    }
    rows.into_iter().map(|(k, v)| vec![k, v, String::new(), String::new(), String::new()]).collect()
}

fn check_rows(checks: &[Check]) -> Vec<Vec<String>> {
    checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                opt(c.predicted),
                opt(c.observed),
                num(c.tolerance),
                c.verdict.as_str().into(),
            ]
        })
        .collect()
}

const ANALYSIS_HEADER: [&str; 5] = ["quantity", "predicted", "observed", "tolerance", "verdict"];

fn analysis_csv(r: &AnalysisReport) -> Result<String, CliError> {
    // prediction-only rows keep their value in the `predicted` column
    let mut rows = analysis_rows(r);
    if let Some(o) = &r.oracle {
        rows.push(vec!["closure_dim".into(), String::new(), o.closure.dimension.to_string(), String::new(), String::new()]);
        rows.extend(check_rows(&o.checks));
    }
    csv_string(&ANALYSIS_HEADER, &rows)
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let l = load(&a.problem)?;
    let config = base_config(&a.problem, &l, a.output.format);
    let report = analysis(&l, provenance("analyze", config, l.inputs.clone()), a.problem.tol_zero);
    let body = match a.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => analysis_csv(&report)?,
    };
    Ok(Outcome { body, exit_code: 0, out: a.output.out.clone() })
}

fn exact_check(name: &str, predicted: f64, observed: f64, note: Option<String>) -> Check {
    Check {
        name: name.into(),
        predicted: Some(predicted),
        observed: Some(observed),
        tolerance: 0.0,
        verdict: Verdict::from_bool(predicted == observed),
        note,
    }
}

fn residual_check(name: &str, observed: f64, tol: f64) -> Check {
    Check {
        name: name.into(),
        predicted: Some(0.0),
        observed: Some(observed),
        tolerance: tol,
        verdict: Verdict::from_bool(observed <= tol),
        note: None,
    }
}

fn not_run(name: &str, predicted: Option<f64>, note: &str) -> Check {
    Check {
        name: name.into(),
        predicted,
        observed: None,
        tolerance: 0.0,
        verdict: Verdict::NotRun,
        note: Some(note.into()),
    }
}

fn to_complex(m: &nalgebra::DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    for (flag, v) in [("--tol-indep", a.tol_indep), ("--tol-rank", a.tol_rank), ("--tol-residual", a.tol_residual)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(input_err(format!("{flag} must be positive")));
        }
    }
    let l = load(&a.problem)?;
    if l.objective.dim() > DEFAULT_ORACLE_CAP {
        return Err(CliError::Cap(
            Error::OracleCap { dim: l.objective.dim(), cap: DEFAULT_ORACLE_CAP }.to_string(),
        ));
    }
    let strategy = match a.strategy {
        StrategyArg::Generators => ClosureStrategy::Generators,
        StrategyArg::AllPairs => ClosureStrategy::AllPairs,
    };
    let mut config = base_config(&a.problem, &l, a.output.format);
    config.mixer = Some(a.mixer);
    config.tol_indep = Some(a.tol_indep);
    config.tol_rank = Some(a.tol_rank);
    config.tol_residual = Some(a.tol_residual);
    config.dim_cap = Some(a.dim_cap);
    config.strategy = Some(strategy);
    let mut report = analysis(&l, provenance("verify", config, l.inputs.clone()), a.problem.tol_zero);

    let opts = ClosureOptions { tol_indep: a.tol_indep, dim_cap: a.dim_cap, strategy };
    let gens = match a.mixer {
        Mixer::Grover => {
            let (h, g) = gm_generators(&l.objective, &l.state, DEFAULT_ORACLE_CAP)?;
            vec![h, g]
        }
        Mixer::X => {
            let (h, b) = x_mixer_generators(&l.objective, DEFAULT_ORACLE_CAP)?;
            vec![h, b]
        }
    };
    let (basis, closure) = lie_closure(&gens, &opts)?;
    let mut checks = Vec::new();
    let mut commutant_dim = None;
    let capped = closure.hit_cap;

    let generator_residual = gens.iter().map(|g| basis.residual(g)).fold(0.0, f64::max);
    checks.push(residual_check("generators_in_closure", generator_residual, a.tol_residual));

    match a.mixer {
        Mixer::X => {
            let note = "no closed-form prediction for the X mixer";
            checks.push(not_run("dla_dim", None, note));
            checks.push(not_run("commutant_dim", None, note));
        }
        Mixer::Grover => {
            let dla = &report.dla;
            if capped {
                checks.push(not_run("dla_dim", Some(dla.dim as f64), "closure stopped at --dim-cap"));
            } else {
                let (predicted, note) = match dla.degenerate {
                    Some(dg) => (dg.span_dim, Some(format!("d = 1: compared with span dimension; formula gives {}", dg.formula_dim))),
                    None => (dla.dim, None),
                };
                checks.push(exact_check("dla_dim", predicted as f64, closure.dimension as f64, note));
            }

            let observed = commutant_dimension(basis.elements(), a.tol_rank)?;
            commutant_dim = Some(observed);
            let mut c = exact_check("commutant_dim", report.commutant.dim as f64, observed as f64, None);
            c.note = Some(format!("eigenvalues <= {:e} x largest counted as null", a.tol_rank));
            checks.push(c);

            let w0 = w0_basis(&l.spectrum, &l.overlaps);
            checks.push(residual_check("w0_invariance", invariant_subspace_residual(&basis, &w0), a.tol_residual));
            let lines = complement_lines(&l.spectrum, &l.overlaps);
            checks.push(residual_check("complement_lines", eigenline_residual(&basis, &lines), a.tol_residual));

            if l.overlaps.d >= 2 {
                let rg = restricted_generators(&l.spectrum, &l.overlaps);
                let diag: Vec<f64> = rg.h_p0.diagonal().iter().copied().collect();
                match extract_matrix_units(&diag, &to_complex(&rg.g_m0), a.problem.tol_zero) {
                    Ok(u) => {
                        let mut c = residual_check("matrix_units", u.max_deviation, a.tol_residual);
                        if u.refined {
                            c.note = Some("needed a refined diagonal selector".into());
                        }
                        checks.push(c);
                    }
                    Err(e @ (Error::AmbiguousSelector { .. } | Error::FrameCondition { .. } | Error::ZeroPivot { .. })) => {
                        checks.push(not_run("matrix_units", Some(0.0), &e.to_string()));
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                checks.push(not_run("matrix_units", Some(0.0), "needs d >= 2"));
            }
        }
    }
    report.oracle = Some(OracleSection { mixer: a.mixer, closure, commutant_dim, checks });

    let oracle = report.oracle.as_ref().expect("just set");
    let exit_code = if oracle.checks.iter().any(|c| c.verdict == Verdict::Mismatch) {
        1
    } else if capped {
        3
    } else {
        0
    };
    let body = match a.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => analysis_csv(&report)?,
    };
    Ok(Outcome { body, exit_code, out: a.output.out.clone() })
}

fn targets(l: &Loaded, tol_zero: f64) -> LossTargets {
    let s = predict_loss_stats(&l.spectrum, &l.overlaps, tol_zero);
    LossTargets {
        loss_variance: s.loss_variance,
        expected_loss: s.expected_loss,
        zeta_mean: s.zeta_mean,
    }
}

fn band_check(name: &str, target: Option<f64>, estimate: f64, stderr: f64, sigmas: f64, missing: &str) -> Check {
    match target {
        None => not_run(name, None, missing),
        Some(t) => {
            let tol = sigmas * stderr;
            Check {
                name: name.into(),
                predicted: Some(t),
                observed: Some(estimate),
                tolerance: tol,
                verdict: Verdict::from_bool((estimate - t).abs() <= tol),
                note: None,
            }
        }
    }
}

fn mc_checks(r: &McReport, t: &LossTargets, sigmas: f64) -> Vec<Check> {
    vec![
        band_check("loss_variance", Some(t.loss_variance), r.variance, r.stderr_variance, sigmas, ""),
        band_check(
            "expected_loss",
            t.expected_loss,
            r.mean,
            r.stderr_mean,
            sigmas,
            "stated only for a two-dimensional center",
        ),
        band_check("zeta_mean", Some(t.zeta_mean), r.mean, r.stderr_mean, sigmas, ""),
    ]
}

fn validate_mc(mc: &McArgs) -> Result<(), CliError> {
    if mc.samples < 2 {
        return Err(input_err("--samples must be at least 2"));
    }
    if !(mc.sigmas > 0.0 && mc.sigmas.is_finite()) {
        return Err(input_err("--sigmas must be positive"));
    }
    if mc.threads == Some(0) {
        return Err(input_err("--threads must be at least 1"));
    }
    Ok(())
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| input_err(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn sweep_rows(report: &SimulationReport) -> Vec<Vec<String>> {
    report
        .runs
        .iter()
        .map(|run| {
            let e = &run.estimate;
            let verdict = |name: &str| {
                run.checks.iter().find(|c| c.name == name).map_or("not_run", |c| c.verdict.as_str()).to_string()
            };
            vec![
                e.p.to_string(),
                e.samples.to_string(),
                e.seed.to_string(),
                num(e.mean),
                num(e.variance),
                num(e.stderr_mean),
                num(e.stderr_variance),
                num(report.targets.loss_variance),
                opt(report.targets.expected_loss),
                num(report.targets.zeta_mean),
                verdict("loss_variance"),
                verdict("expected_loss"),
                verdict("zeta_mean"),
            ]
        })
        .collect()
}

fn render_sim(report: &SimulationReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => csv_string(&SWEEP_HEADER, &sweep_rows(report)),
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    validate_mc(&a.mc)?;
    if a.depth < 1 {
        return Err(input_err("--depth must be at least 1"));
    }
    let l = load(&a.problem)?;
    let mut config = base_config(&a.problem, &l, a.output.format);
    config.depth = Some(a.depth);
    config.samples = Some(a.mc.samples);
    config.seed = Some(a.mc.seed);
    config.sigmas = Some(a.mc.sigmas);
    let t = targets(&l, a.problem.tol_zero);
    let est = in_pool(a.mc.threads, || monte_carlo_stats(&l.state, &l.objective, a.depth, a.mc.samples, a.mc.seed))??;
    let checks = mc_checks(&est, &t, a.mc.sigmas);
    let report = SimulationReport {
        provenance: provenance("simulate", config, l.inputs.clone()),
        problem: describe(&l),
        targets: t,
        runs: vec![SimulationEntry { estimate: est, checks }],
    };
    Ok(Outcome { body: render_sim(&report, a.output.format)?, exit_code: 0, out: a.output.out.clone() })
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    validate_mc(&a.mc)?;
    if a.depths.is_empty() {
        return Err(input_err("--depths needs at least one depth"));
    }
    if a.depths.contains(&0) {
        return Err(input_err("depths must be at least 1"));
    }
    let l = load(&a.problem)?;
    let mut config = base_config(&a.problem, &l, a.format);
    config.depths = Some(a.depths.clone());
    config.samples = Some(a.mc.samples);
    config.seed = Some(a.mc.seed);
    config.sigmas = Some(a.mc.sigmas);
    let t = targets(&l, a.problem.tol_zero);
    let reports = in_pool(a.mc.threads, || depth_sweep(&l.state, &l.objective, &a.depths, a.mc.samples, a.mc.seed))??;
    let runs = reports
        .into_iter()
        .map(|est| SimulationEntry { checks: mc_checks(&est, &t, a.mc.sigmas), estimate: est })
        .collect();
    let report = SimulationReport {
        provenance: provenance("sweep", config, l.inputs.clone()),
        problem: describe(&l),
        targets: t,
        runs,
    };
    Ok(Outcome { body: render_sim(&report, a.format)?, exit_code: 0, out: a.out.clone() })
}

/// Runs a parsed command without touching standard output.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

/// Parses `args`, runs the command, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &outcome.out {
                Some(p) => fs::write(p, &outcome.body).map_err(|e| format!("{}: {e}", p.display())),
                None => std::io::stdout().write_all(outcome.body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
