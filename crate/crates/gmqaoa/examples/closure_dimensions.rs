//! Lie closure of the Grover-mixer and X-mixer generators for the bundled
//! graphs, next to the closed-form prediction.
//!
//! ```text
//! cargo run --release --example closure_dimensions
//! ```

use std::time::Instant;

use gmqaoa::analytic::predict_dla;
use gmqaoa::oracle::{gm_generators, lie_closure, x_mixer_generators, ClosureOptions, DEFAULT_ORACLE_CAP};
use gmqaoa::problems::{maxcut_objective, parse_graph};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, uniform_state, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO};

const GRAPHS: [(&str, &str); 6] = [
    ("p3", include_str!("../data/p3.graph")),
    ("p4", include_str!("../data/p4.graph")),
    ("c4", include_str!("../data/c4.graph")),
    ("c6", include_str!("../data/c6.graph")),
    ("k4", include_str!("../data/k4.graph")),
    ("house", include_str!("../data/house.graph")),
];

pub fn run_example() -> gmqaoa::Result<Vec<(String, usize, usize, usize)>> {
    let opts = ClosureOptions::default();
    let mut rows = Vec::new();
    println!("{:<6} {:>9} {:>9} {:>9} {:>8}", "graph", "predicted", "gm", "x", "secs");
    for (name, text) in GRAPHS {
        let t = Instant::now();
        let f = maxcut_objective(&parse_graph(text)?, DEFAULT_MAX_DIM)?;
        let xi = uniform_state(f.n(), 2)?;
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&xi, &s, DEFAULT_TOL_ZERO)?;
        let predicted = predict_dla(&s, &o, DEFAULT_TOL_ZERO).dim as usize;

        let (h, g) = gm_generators(&f, &xi, DEFAULT_ORACLE_CAP)?;
        let gm = lie_closure(&[h, g], &opts)?.1.dimension;
        let (h, b) = x_mixer_generators(&f, DEFAULT_ORACLE_CAP)?;
        let x = lie_closure(&[h, b], &opts)?.1.dimension;
        println!("{name:<6} {predicted:>9} {gm:>9} {x:>9} {:>8.2}", t.elapsed().as_secs_f64());
        rows.push((name.to_string(), predicted, gm, x));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example().map(|_| ())
}
