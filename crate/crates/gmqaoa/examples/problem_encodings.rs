//! Objective tables for the other bundled problem families: violated CNF
//! clauses, monochromatic edges, a thresholded objective and a custom table.

use gmqaoa::problems::{
    cnf_objective, coloring_objective, maxcut_objective, parse_cnf, parse_custom_table, parse_graph,
    threshold_transform,
};
use gmqaoa::spectrum::{build_spectrum, ObjectiveTable, DEFAULT_MAX_DIM};

fn show(name: &str, f: &ObjectiveTable) -> (Vec<f64>, Vec<usize>) {
    let s = build_spectrum(f);
    println!("{name:<18} n={} q={} values {:?} multiplicities {:?}", f.n(), f.q(), s.values(), s.multiplicities());
    (s.values(), s.multiplicities())
}

pub fn run_example() -> gmqaoa::Result<Vec<(Vec<f64>, Vec<usize>)>> {
    let cnf = parse_cnf(include_str!("../data/sample.cnf"))?;
    let triangle = parse_graph(include_str!("../data/k3.graph"))?;
    let p4 = maxcut_objective(&parse_graph(include_str!("../data/p4.graph"))?, DEFAULT_MAX_DIM)?;
    Ok(vec![
        show("violated clauses", &cnf_objective(&cnf, DEFAULT_MAX_DIM)?),
        show("triangle conflicts", &coloring_objective(&triangle, 3, DEFAULT_MAX_DIM)?),
        show("p4 cut >= 2", &threshold_transform(&p4, 2.0, false)),
        show("custom table", &parse_custom_table(include_str!("../data/sample_table.json"))?),
    ])
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example().map(|_| ())
}
