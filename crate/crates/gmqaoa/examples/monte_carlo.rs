//! Deep-circuit loss statistics from random parameters, next to the closed forms.
//!
//! ```text
//! cargo run --release --example monte_carlo
//! ```

use gmqaoa::analytic::predict_loss_stats;
use gmqaoa::problems::{maxcut_objective, parse_graph};
use gmqaoa::sim::{monte_carlo_stats, McReport};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, uniform_state, DEFAULT_MAX_DIM, DEFAULT_TOL_ZERO};

pub fn run_example(depth: usize, samples: usize) -> gmqaoa::Result<Vec<McReport>> {
    let mut out = Vec::new();
    for (name, text) in [("p3", include_str!("../data/p3.graph")), ("p4", include_str!("../data/p4.graph"))] {
        let f = maxcut_objective(&parse_graph(text)?, DEFAULT_MAX_DIM)?;
        let xi = uniform_state(f.n(), 2)?;
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&xi, &s, DEFAULT_TOL_ZERO)?;
        let target = predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO);
        let r = monte_carlo_stats(&xi, &f, depth, samples, 7)?;
        println!(
            "{name}: variance {:.4} +- {:.4} (closed form {:.4}); mean {:.4} +- {:.4} (zeta mean {:.4}, stated {:?})",
            r.variance, r.stderr_variance, target.loss_variance, r.mean, r.stderr_mean, target.zeta_mean, target.expected_loss
        );
        out.push(r);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example(32, 4096).map(|_| ())
}
