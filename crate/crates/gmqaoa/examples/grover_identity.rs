//! `-(1/2^n) prod_j (I + X_j)` is the negative projector onto `|+...+>`.

use gmqaoa::sim::grover_mixer_identity_check;

pub fn run_example(max_n: usize) -> gmqaoa::Result<Vec<f64>> {
    (1..=max_n)
        .map(|n| {
            let gap = grover_mixer_identity_check(n)?;
            println!("n = {n}: max entry gap {gap:.1e}");
            Ok(gap)
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> gmqaoa::Result<()> {
    run_example(8).map(|_| ())
}
