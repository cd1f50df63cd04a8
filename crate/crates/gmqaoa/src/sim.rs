//! Dense statevector simulation of GM-QAOA and Monte Carlo loss statistics.
//!
//! Randomness: sample `i` of a run with master seed `s` draws its parameters
//! from `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`. ChaCha is a
//! counter-based generator, so every sample owns an independent stream that
//! does not depend on which worker evaluates it. Within a sample the draw
//! order is `gamma_1, beta_1, gamma_2, beta_2, ...`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{InitialState, ObjectiveTable, DEFAULT_TOL_NORM};

pub const DEFAULT_DEPTH: usize = 32;
pub const DEFAULT_SAMPLES: usize = 4096;

/// Amplitudes of a pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn from_initial(xi: &InitialState) -> Self {
        Self::new(xi.amplitudes().to_vec())
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Angles of a depth-`p` circuit. `betas[k]` and `gammas[k]` belong to layer `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl ParameterSet {
    /// Requires equal lengths, `beta` in `[0, 2pi)` and `gamma` in `[0, pi)`.
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.len() != gammas.len() {
            return Err(Error::DimensionMismatch { expected: betas.len(), got: gammas.len() });
        }
        if let Some(b) = betas.iter().find(|b| !(0.0..2.0 * PI).contains(*b)) {
            return Err(Error::Invalid(format!("beta {b} outside [0, 2pi)")));
        }
        if let Some(g) = gammas.iter().find(|g| !(0.0..PI).contains(*g)) {
            return Err(Error::Invalid(format!("gamma {g} outside [0, pi)")));
        }
        Ok(Self { betas, gammas })
    }

    /// Uniform draw over the parameter box.
    pub fn sample<R: Rng>(p: usize, rng: &mut R) -> Self {
        let mut betas = Vec::with_capacity(p);
        let mut gammas = Vec::with_capacity(p);
        for _ in 0..p {
            gammas.push(rng.gen_range(0.0..PI));
            betas.push(rng.gen_range(0.0..2.0 * PI));
        }
        Self { betas, gammas }
    }

    pub fn depth(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Multiplies the amplitude of `x` by `exp(-i gamma F(x))`.
pub fn apply_phase_layer(state: &mut StateVector, objective: &ObjectiveTable, gamma: f64) -> Result<()> {
    check_dim(objective.dim(), state.dim())?;
    for (a, &f) in state.amplitudes.iter_mut().zip(objective.values()) {
        *a *= Complex64::from_polar(1.0, -gamma * f);
    }
    Ok(())
}

/// `exp(i beta |xi><xi|)` in rank-one form: `psi + (e^{i beta} - 1) <xi|psi> xi`.
pub fn apply_grover_mixer(state: &mut StateVector, xi: &InitialState, beta: f64) -> Result<()> {
    check_dim(xi.dim(), state.dim())?;
    let xi = xi.amplitudes();
    let overlap: Complex64 = xi.iter().zip(&state.amplitudes).map(|(x, a)| x.conj() * a).sum();
    let k = (Complex64::from_polar(1.0, beta) - 1.0) * overlap;
    for (a, x) in state.amplitudes.iter_mut().zip(xi) {
        *a += k * x;
    }
    Ok(())
}

/// Layers applied in order; each is the phase layer followed by the mixer.
pub fn run_circuit(xi: &InitialState, objective: &ObjectiveTable, params: &ParameterSet) -> Result<StateVector> {
    check_dim(objective.dim(), xi.dim())?;
    let mut psi = StateVector::from_initial(xi);
    for (&g, &b) in params.gammas.iter().zip(&params.betas) {
        apply_phase_layer(&mut psi, objective, g)?;
        apply_grover_mixer(&mut psi, xi, b)?;
    }
    Ok(psi)
}

/// `sum_x F(x) |psi(x)|^2`, evaluated as `min F + sum_x (F(x) - min F) |psi(x)|^2`
/// so that a constant objective gives its value exactly.
pub fn loss(state: &StateVector, objective: &ObjectiveTable) -> Result<f64> {
    check_dim(objective.dim(), state.dim())?;
    let base = objective.min_value();
    let terms: Vec<f64> =
        state.amplitudes.iter().zip(objective.values()).map(|(a, f)| (f - base) * a.norm_sqr()).collect();
    Ok(base + pairwise_sum(&terms))
}

/// Fixed-shape pairwise summation: the rounding depends on the length only.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub p: usize,
    pub samples: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub stderr_mean: f64,
    /// From the fourth central moment: `sqrt((m4 - (M-3)/(M-1) s^4) / M)`.
    pub stderr_variance: f64,
    pub seed: u64,
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// The parameter set drawn for sample `index` of a run with master `seed`.
pub fn sample_parameters(p: usize, seed: u64, index: usize) -> ParameterSet {
    ParameterSet::sample(p, &mut sample_rng(seed, index))
}

/// Loss mean and variance over `samples` uniform parameter draws at depth `p`.
///
/// Runs on the current rayon pool; the result is bit-identical for any pool size.
pub fn monte_carlo_stats(
    xi: &InitialState,
    objective: &ObjectiveTable,
    p: usize,
    samples: usize,
    seed: u64,
) -> Result<McReport> {
    if samples < 2 {
        return Err(Error::Invalid("monte carlo needs at least 2 samples".into()));
    }
    if p < 1 {
        return Err(Error::Invalid("monte carlo needs depth p >= 1".into()));
    }
    check_dim(objective.dim(), xi.dim())?;
    let losses: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let params = sample_parameters(p, seed, i);
            let psi = run_circuit(xi, objective, &params).expect("dimensions checked");
            loss(&psi, objective).expect("dimensions checked")
        })
        .collect();
    Ok(summarize(&losses, p, seed))
}

fn summarize(xs: &[f64], p: usize, seed: u64) -> McReport {
    let m = xs.len() as f64;
    let mean = pairwise_sum(xs) / m;
    let dev2: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    let dev4: Vec<f64> = dev2.iter().map(|d| d * d).collect();
    let ss = pairwise_sum(&dev2);
    let variance = ss / (m - 1.0);
    let m2 = ss / m;
    let m4 = pairwise_sum(&dev4) / m;
    let var_of_var = ((m4 - (m - 3.0) / (m - 1.0) * m2 * m2) / m).max(0.0);
    McReport {
        p,
        samples: xs.len(),
        mean,
        variance,
        stderr_mean: (variance / m).sqrt(),
        stderr_variance: var_of_var.sqrt(),
        seed,
    }
}

/// One report per depth, all sharing `seed`.
pub fn depth_sweep(
    xi: &InitialState,
    objective: &ObjectiveTable,
    depths: &[usize],
    samples: usize,
    seed: u64,
) -> Result<Vec<McReport>> {
    if depths.is_empty() {
        return Err(Error::Invalid("depth list is empty".into()));
    }
    depths.iter().map(|&p| monte_carlo_stats(xi, objective, p, samples, seed)).collect()
}

/// Max entrywise gap between `-(1/2^n) prod_j (I + X_j)` and `-|+..+><+..+|`.
pub fn grover_mixer_identity_check(n: usize) -> Result<f64> {
    if n > 10 {
        return Err(Error::SizeLimit { n, q: 2, limit: 1 << 10 });
    }
    let dim = 1usize << n;
    // prod (I + X_j) is built factor by factor so the check does not assume
    // the closed form it is testing.
    let mut prod = vec![0.0f64; dim * dim];
    for i in 0..dim {
        prod[i * dim + i] = 1.0;
    }
    for j in 0..n {
        let mut next = prod.clone();
        for r in 0..dim {
            for c in 0..dim {
                // (I + X_j) * prod: row r picks up row r ^ (1 << j)
                next[r * dim + c] += prod[(r ^ (1 << j)) * dim + c];
            }
        }
        prod = next;
    }
    let scale = -1.0 / dim as f64;
    // every entry of |+..+><+..+| is exactly 1/2^n
    let plus_entry = 1.0 / dim as f64;
    let mut worst: f64 = 0.0;
    for v in &prod {
        worst = worst.max((scale * v + plus_entry).abs());
    }
    Ok(worst)
}

/// Checks that the state is still normalized within the default tolerance.
pub fn check_unitarity(state: &StateVector) -> Result<()> {
    let drift = (state.norm() - 1.0).abs();
    if drift > DEFAULT_TOL_NORM {
        Err(Error::Tolerance { what: "norm drift".into(), value: drift, tol: DEFAULT_TOL_NORM })
    } else {
        Ok(())
    }
}
