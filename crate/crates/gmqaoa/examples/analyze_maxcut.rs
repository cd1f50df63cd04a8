//! Closed-form predictions for MaxCut on a graph read from disk.
//!
//! ```text
//! cargo run --example analyze_maxcut -- data/house.graph
//! ```

use gmqaoa::analytic::{isotypic_summary, predict_commutant, predict_dla, predict_loss_stats};
use gmqaoa::problems::{maxcut_objective, parse_graph};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, uniform_state, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO};

pub struct Summary {
    pub d: usize,
    pub dla_dim: usize,
    pub commutant_dim: u64,
    pub loss_variance: f64,
}

pub fn run_example(graph_text: &str) -> gmqaoa::Result<Summary> {
    let graph = parse_graph(graph_text)?;
    let f = maxcut_objective(&graph, DEFAULT_MAX_DIM)?;
    let spectrum = build_spectrum(&f);
    let overlaps = decompose_initial_state(&uniform_state(f.n(), 2)?, &spectrum, DEFAULT_TOL_ZERO)?;

    println!("{} vertices, {} edges", graph.vertex_count(), graph.edge_count());
    for (level, c) in spectrum.levels().iter().zip(&overlaps.c) {
        println!("  cut {:>3}  x{:<4} c = {c:.6}", level.value, level.multiplicity);
    }

    let dla = predict_dla(&spectrum, &overlaps, DEFAULT_TOL_ZERO);
    let commutant = predict_commutant(&spectrum, &overlaps);
    let loss = predict_loss_stats(&spectrum, &overlaps, DEFAULT_TOL_ZERO);
    let (w0, lines) = isotypic_summary(&spectrum, &overlaps);
    println!("DLA          {} (dim {})", dla.algebra, dla.dim);
    println!("commutant    dim {}", commutant.dim);
    println!("isotypic     W_0 of dim {w0} plus {lines} invariant lines");
    println!("loss         Var = {:.6}, zeta mean = {:.6}", loss.loss_variance, loss.zeta_mean);
    Ok(Summary {
        d: dla.d,
        dla_dim: dla.dim,
        commutant_dim: commutant.dim,
        loss_variance: loss.loss_variance,
    })
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("../data/house.graph").to_string(),
    };
    run_example(&text).map(|_| ())
}
