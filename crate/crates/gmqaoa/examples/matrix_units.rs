//! Builds every off-diagonal matrix unit out of `D = diag(lambda)` and
//! `A = -c c^T`, the generators restricted to the irreducible block.
//!
//! P3 MaxCut has the evenly spaced values 2, 1, 0, so two of the selectors
//! collide under `ad_D` and the extraction has to refine its diagonal.

use gmqaoa::analytic::restricted_generators;
use gmqaoa::oracle::{extract_matrix_units, frame_condition, CMatrix};
use gmqaoa::problems::{maxcut_objective, parse_graph};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, uniform_state, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO};
use num_complex::Complex64;

pub fn run_example() -> gmqaoa::Result<f64> {
    let f = maxcut_objective(&parse_graph(include_str!("../data/p3.graph"))?, DEFAULT_MAX_DIM)?;
    let s = build_spectrum(&f);
    let o = decompose_initial_state(&uniform_state(3, 2)?, &s, DEFAULT_TOL_ZERO)?;
    let rg = restricted_generators(&s, &o);
    let diag: Vec<f64> = rg.h_p0.diagonal().iter().copied().collect();
    let a: CMatrix = rg.g_m0.map(|v| Complex64::new(v, 0.0));
    println!("D = {diag:?}");
    println!("frame condition: {}", frame_condition(&a, DEFAULT_TOL_ZERO));

    let units = extract_matrix_units(&diag, &a, DEFAULT_TOL_ZERO)?;
    for (i, j, e) in &units.units {
        println!("E_{}{} recovered, entry = {:.3}", i + 1, j + 1, e[(*i, *j)].re);
    }
    println!("refined: {}, max deviation {:.2e}", units.refined, units.max_deviation);
    Ok(units.max_deviation)
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example().map(|_| ())
}
