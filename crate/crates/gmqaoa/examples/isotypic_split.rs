//! The span of the level components is invariant under the whole closure and
//! its complement breaks into common eigenlines.

use gmqaoa::oracle::{
    complement_lines, eigenline_residual, gm_generators, invariant_subspace_residual, lie_closure, w0_basis,
    ClosureOptions, DEFAULT_ORACLE_CAP,
};
use gmqaoa::problems::{maxcut_objective, parse_graph};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, uniform_state, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO};

/// Largest invariance and eigenline residuals over the bundled graphs.
pub fn run_example() -> gmqaoa::Result<(f64, f64)> {
    let graphs = [
        ("p3", include_str!("../data/p3.graph")),
        ("c4", include_str!("../data/c4.graph")),
        ("house", include_str!("../data/house.graph")),
    ];
    let (mut worst_w0, mut worst_lines) = (0.0f64, 0.0f64);
    for (name, text) in graphs {
        let f = maxcut_objective(&parse_graph(text)?, DEFAULT_MAX_DIM)?;
        let xi = uniform_state(f.n(), 2)?;
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&xi, &s, DEFAULT_TOL_ZERO)?;
        let (h, g) = gm_generators(&f, &xi, DEFAULT_ORACLE_CAP)?;
        let (basis, _) = lie_closure(&[h, g], &ClosureOptions::default())?;
        let w0 = w0_basis(&s, &o);
        let lines = complement_lines(&s, &o);
        let a = invariant_subspace_residual(&basis, &w0);
        let b = eigenline_residual(&basis, &lines);
        println!("{name:<6} dim W_0 = {}  lines = {:>2}  residuals {a:.2e} / {b:.2e}", w0.len(), lines.len());
        worst_w0 = worst_w0.max(a);
        worst_lines = worst_lines.max(b);
    }
    Ok((worst_w0, worst_lines))
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example().map(|_| ())
}
