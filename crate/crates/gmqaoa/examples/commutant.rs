//! Numerical commutant of the closure against `1 + sum (n_j - 1)^2 + sum n_j^2`,
//! for the uniform state and for a single basis string.

use gmqaoa::analytic::{centralizer_dim, predict_commutant};
use gmqaoa::oracle::{commutant_dimension, gm_generators, lie_closure, ClosureOptions, DEFAULT_ORACLE_CAP, DEFAULT_TOL_RANK};
use gmqaoa::problems::{maxcut_objective, parse_graph};
use gmqaoa::spectrum::{
    build_spectrum, decompose_initial_state, uniform_state, InitialState, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO,
};

pub fn run_example() -> gmqaoa::Result<Vec<(String, u64, usize)>> {
    let cases = [
        ("p3 uniform", include_str!("../data/p3.graph"), None),
        ("p3 |000>", include_str!("../data/p3.graph"), Some(0)),
        ("c4 uniform", include_str!("../data/c4.graph"), None),
        ("house uniform", include_str!("../data/house.graph"), None),
    ];
    let mut out = Vec::new();
    for (name, text, basis) in cases {
        let f = maxcut_objective(&parse_graph(text)?, DEFAULT_MAX_DIM)?;
        let xi = match basis {
            Some(i) => InitialState::basis(f.dim(), i)?,
            None => uniform_state(f.n(), 2)?,
        };
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&xi, &s, DEFAULT_TOL_ZERO)?;
        let (h, g) = gm_generators(&f, &xi, DEFAULT_ORACLE_CAP)?;
        let (basis, _) = lie_closure(&[h, g], &ClosureOptions::default())?;
        let got = commutant_dimension(basis.elements(), DEFAULT_TOL_RANK)?;
        let want = predict_commutant(&s, &o).dim;
        println!("{name:<14} predicted {want:>4}  numerical {got:>4}  centralizer bound {}", centralizer_dim(&s));
        out.push((name.to_string(), want, got));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example().map(|_| ())
}
