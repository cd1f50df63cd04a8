//! How fast the loss variance approaches its deep-circuit value on P4.

use gmqaoa::analytic::predict_loss_stats;
use gmqaoa::problems::{maxcut_objective, parse_graph};
use gmqaoa::sim::{depth_sweep, McReport};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, uniform_state, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO};

pub fn run_example(depths: &[usize], samples: usize) -> gmqaoa::Result<Vec<McReport>> {
    let f = maxcut_objective(&parse_graph(include_str!("../data/p4.graph"))?, DEFAULT_MAX_DIM)?;
    let xi = uniform_state(4, 2)?;
    let s = build_spectrum(&f);
    let o = decompose_initial_state(&xi, &s, DEFAULT_TOL_ZERO)?;
    let target = predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO).loss_variance;
    let reports = depth_sweep(&xi, &f, depths, samples, 11)?;
    println!("{:>4} {:>10} {:>10} {:>8}", "p", "variance", "stderr", "z");
    for r in &reports {
        let z = (r.variance - target) / r.stderr_variance;
        println!("{:>4} {:>10.5} {:>10.5} {:>8.2}", r.p, r.variance, r.stderr_variance, z);
    }
    println!("target {target:.5}");
    Ok(reports)
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example(&[1, 2, 4, 8, 16, 32], 2048).map(|_| ())
}
