//! One GM-QAOA circuit evaluation with explicit angles.

use std::f64::consts::PI;

use gmqaoa::problems::{maxcut_objective, Graph};
use gmqaoa::sim::{loss, run_circuit, ParameterSet};
use gmqaoa::spectrum::{uniform_state, DEFAULT_MAX_DIM};

pub fn run_example() -> gmqaoa::Result<f64> {
    let f = maxcut_objective(&Graph::cycle(6)?, DEFAULT_MAX_DIM)?;
    let xi = uniform_state(6, 2)?;
    let params = ParameterSet::new(vec![PI / 2.0, PI / 3.0, PI / 4.0], vec![0.4, 0.8, 1.2])?;
    let psi = run_circuit(&xi, &f, &params)?;
    let l = loss(&psi, &f)?;
    println!("p = {}: <F> = {l:.6}, norm = {:.15}", params.depth(), psi.norm());
    let best = (0..f.dim()).max_by(|&a, &b| f.value(a).total_cmp(&f.value(b))).unwrap_or(0);
    println!("probability of the optimal string {:?}: {:.4}", f.digits(best), psi.amplitudes()[best].norm_sqr());
    Ok(l)
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example().map(|_| ())
}
