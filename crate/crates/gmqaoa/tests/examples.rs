//! Runs every example through its `run_example` entry point.

#[path = "../examples/analyze_maxcut.rs"]
mod analyze_maxcut;
#[path = "../examples/circuit.rs"]
mod circuit;
#[path = "../examples/cli_report.rs"]
mod cli_report;
#[path = "../examples/closure_dimensions.rs"]
mod closure_dimensions;
#[path = "../examples/commutant.rs"]
mod commutant;
#[path = "../examples/depth_sweep.rs"]
mod depth_sweep;
#[path = "../examples/grover_identity.rs"]
mod grover_identity;
#[path = "../examples/isotypic_split.rs"]
mod isotypic_split;
#[path = "../examples/matrix_units.rs"]
mod matrix_units;
#[path = "../examples/monte_carlo.rs"]
mod monte_carlo;
#[path = "../examples/problem_encodings.rs"]
mod problem_encodings;
#[path = "../examples/sum_zero_branch.rs"]
mod sum_zero_branch;

#[test]
fn analyze_house() {
    let s = analyze_maxcut::run_example(include_str!("../data/house.graph")).unwrap();
    assert_eq!((s.d, s.dla_dim, s.commutant_dim), (5, 26, 206));
    assert!(s.loss_variance > 0.0);
}

#[test]
fn circuit_conserves_probability() {
    let l = circuit::run_example().unwrap();
    assert!(l.is_finite() && l >= 0.0);
}

#[test]
fn cli_report_round_trip() {
    let r = cli_report::run_example().unwrap();
    assert_eq!(r.oracle.unwrap().closure.dimension, 17);
}

#[test]
fn closure_dimensions_match() {
    let rows = closure_dimensions::run_example().unwrap();
    assert_eq!(rows.len(), 6);
    for (name, predicted, gm, _) in &rows {
        assert_eq!(predicted, gm, "{name}");
    }
    let x: Vec<usize> = rows.iter().map(|r| r.3).collect();
    assert_eq!(x, vec![9, 16, 11, 17, 15, 248]);
}

#[test]
fn commutant_matches() {
    for (name, want, got) in commutant::run_example().unwrap() {
        assert_eq!(want, got as u64, "{name}");
    }
}

#[test]
fn depth_sweep_runs() {
    let rows = depth_sweep::run_example(&[1, 4], 64).unwrap();
    assert_eq!(rows.iter().map(|r| r.p).collect::<Vec<_>>(), vec![1, 4]);
}

#[test]
fn grover_identity_exact() {
    let gaps = grover_identity::run_example(4).unwrap();
    assert_eq!(gaps.len(), 4);
    assert!(gaps.iter().all(|&g| g < 1e-12));
}

#[test]
fn isotypic_residuals_small() {
    let (w0, lines) = isotypic_split::run_example().unwrap();
    assert!(w0 < 1e-8 && lines < 1e-8);
}

#[test]
fn matrix_units_exact() {
    assert!(matrix_units::run_example().unwrap() < 1e-9);
}

#[test]
fn monte_carlo_small() {
    let reports = monte_carlo::run_example(4, 128).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.samples == 128 && r.variance > 0.0));
}

#[test]
fn problem_encodings_spectra() {
    let rows = problem_encodings::run_example().unwrap();
    assert_eq!(rows.len(), 4);
    for (values, mults) in &rows {
        assert_eq!(values.len(), mults.len());
        assert!(values.windows(2).all(|w| w[0] > w[1]));
    }
    // thresholded p4 cut: two levels
    assert_eq!(rows[2].0, vec![1.0, 0.0]);
}

#[test]
fn sum_zero_branch_outcomes() {
    assert_eq!(sum_zero_branch::run_example().unwrap(), vec![(4, 4), (4, 5)]);
}
