//! When the level coefficients sum to zero the closure can still be
//! `d^2 + 1`-dimensional: `H_P` restricted to the complement of the
//! irreducible block contributes a second central direction unless that
//! restriction is a multiple of the identity.

use gmqaoa::analytic::predict_dla;
use gmqaoa::oracle::{gm_generators, lie_closure, ClosureOptions, DEFAULT_ORACLE_CAP};
use gmqaoa::problems::{parse_custom_table, parse_initial_state};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, InitialState, ObjectiveTable, DEFAULT_TOL_ZERO};

fn compare(name: &str, f: &ObjectiveTable, xi: &InitialState) -> gmqaoa::Result<(usize, usize)> {
    let s = build_spectrum(f);
    let o = decompose_initial_state(xi, &s, DEFAULT_TOL_ZERO)?;
    let predicted = predict_dla(&s, &o, DEFAULT_TOL_ZERO);
    let (h, g) = gm_generators(f, xi, DEFAULT_ORACLE_CAP)?;
    let got = lie_closure(&[h, g], &ClosureOptions::default())?.1.dimension;
    println!("{name:<10} sum c = {:+.3}  predicted {}  closure {got}", predicted.sum_c, predicted.dim);
    Ok((predicted.dim, got))
}

pub fn run_example() -> gmqaoa::Result<Vec<(usize, usize)>> {
    let one_qubit = ObjectiveTable::new(1, 2, vec![1.0, 0.0])?;
    let minus = InitialState::normalized(vec![1.0.into(), (-1.0).into()])?;
    let two_qubit = parse_custom_table(include_str!("../data/two_level_table.json"))?;
    let state = parse_initial_state(include_str!("../data/sum_zero_state.json"))?;
    Ok(vec![compare("n = 1", &one_qubit, &minus)?, compare("n = 2", &two_qubit, &state)?])
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example().map(|_| ())
}
