//! Real Lie closure of a set of skew-Hermitian matrices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CMatrix;
use crate::error::{Error, Result};

/// How new candidates are formed each round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureStrategy {
    /// Bracket each new element with the input generators only. Spans the
    /// same algebra (left-normed brackets of generators span it) and keeps
    /// rounding noise from compounding through nearly dependent directions.
    #[default]
    Generators,
    /// Bracket each new element with every basis element present when it is visited.
    AllPairs,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureOptions {
    /// Minimum residual norm, after normalizing the candidate to unit
    /// Hilbert-Schmidt norm, for it to count as a new direction.
    pub tol_indep: f64,
    pub dim_cap: usize,
    pub strategy: ClosureStrategy,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            tol_indep: 1e-9,
            dim_cap: 4096,
            strategy: ClosureStrategy::Generators,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub dimension: usize,
    pub rounds: usize,
    /// Largest residual among rejected candidates.
    pub max_residual_discarded: f64,
    /// Smallest residual among accepted candidates (0 when nothing was accepted).
    pub min_residual_accepted: f64,
    /// When set, `dimension` is only a lower bound.
    pub hit_cap: bool,
}

/// Hilbert-Schmidt orthonormal skew-Hermitian matrices.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim_space: usize,
    elements: Vec<CMatrix>,
}

fn re_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

fn hs_norm(a: &CMatrix) -> f64 {
    re_inner(a, a).sqrt()
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

impl OperatorBasis {
    pub fn new(dim_space: usize) -> Self {
        Self {
            dim_space,
            elements: Vec::new(),
        }
    }

    pub fn dim_space(&self) -> usize {
        self.dim_space
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Two passes of classical Gram-Schmidt. Each inner product is a
    /// sequential sum, so the result does not depend on the thread count.
    fn orthogonalize(&self, v: &mut CMatrix) {
        for _ in 0..2 {
            let coeffs: Vec<f64> = if self.elements.len() >= 32 {
                self.elements.par_iter().map(|b| re_inner(b, v)).collect()
            } else {
                self.elements.iter().map(|b| re_inner(b, v)).collect()
            };
            for (b, &c) in self.elements.iter().zip(&coeffs) {
                if c != 0.0 {
                    for (x, y) in v.as_mut_slice().iter_mut().zip(b.as_slice()) {
                        *x -= y * c;
                    }
                }
            }
        }
    }

    /// Adds the normalized residual of `candidate` if it exceeds `tol`.
    /// Returns the residual norm and whether it was added.
    fn try_push(&mut self, candidate: &CMatrix, tol: f64) -> (f64, bool) {
        let nrm = hs_norm(candidate);
        if !(nrm > tol) {
            return (nrm, false);
        }
        let mut v = candidate.unscale(nrm);
        self.orthogonalize(&mut v);
        let res = hs_norm(&v);
        if res > tol {
            self.elements.push(v.unscale(res));
            (res, true)
        } else {
            (res, false)
        }
    }

    /// Relative norm of the part of `m` outside the span.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let nrm = hs_norm(m);
        if nrm == 0.0 {
            return 0.0;
        }
        let mut v = m.unscale(nrm);
        self.orthogonalize(&mut v);
        hs_norm(&v)
    }

    /// `max ||E^dagger + E||` over elements.
    pub fn skew_deviation(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| {
                let s = e.adjoint() + e;
                s.iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// `max |G - I|` for the real Gram matrix.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((re_inner(a, b) - target).abs());
            }
        }
        worst
    }
}

/// Real dimension and an orthonormal basis of the Lie algebra generated by `generators`.
///
/// Generators are normalized and orthogonalized in input order. Each round
/// brackets every frontier element (elements added in the previous round)
/// with the partners chosen by the strategy, in index order, and keeps
/// residuals above `tol_indep`. Stops when a round adds nothing or the basis
/// reaches `dim_cap`; the latter is flagged in the report.
pub fn lie_closure(generators: &[CMatrix], options: &ClosureOptions) -> Result<(OperatorBasis, ClosureReport)> {
    let dim_space = generators.first().map_or(0, |g| g.nrows());
    for g in generators {
        if g.nrows() != dim_space || g.ncols() != dim_space {
            return Err(Error::DimensionMismatch {
                expected: dim_space,
                got: g.nrows().max(g.ncols()),
            });
        }
        let skew = (g.adjoint() + g).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        if skew > 1e-9 * scale {
            return Err(Error::Invalid(format!("generator is not skew-Hermitian (deviation {skew:.3e})")));
        }
    }

    let tol = options.tol_indep;
    let mut basis = OperatorBasis::new(dim_space);
    let mut report = ClosureReport {
        dimension: 0,
        rounds: 0,
        max_residual_discarded: 0.0,
        min_residual_accepted: f64::INFINITY,
        hit_cap: false,
    };
    let note = |report: &mut ClosureReport, res: f64, added: bool| {
        if added {
            report.min_residual_accepted = report.min_residual_accepted.min(res);
        } else {
            report.max_residual_discarded = report.max_residual_discarded.max(res);
        }
    };

    let mut partners: Vec<CMatrix> = Vec::new();
    let mut frontier = Vec::new();
    for g in generators {
        let nrm = hs_norm(g);
        if nrm > 0.0 {
            partners.push(g.unscale(nrm));
        }
        if basis.len() >= options.dim_cap && basis.residual(g) > tol {
            report.hit_cap = true;
            break;
        }
        let (res, added) = basis.try_push(g, tol);
        note(&mut report, res, added);
        if added {
            frontier.push(basis.len() - 1);
        }
    }

    'outer: while !frontier.is_empty() && !report.hit_cap {
        report.rounds += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            let candidates: Vec<CMatrix> = {
                let elem = &basis.elements[i];
                match options.strategy {
                    ClosureStrategy::Generators => partners.par_iter().map(|g| commutator(g, elem)).collect(),
                    ClosureStrategy::AllPairs => {
                        basis.elements.par_iter().map(|b| commutator(elem, b)).collect()
                    }
                }
            };
            for cand in &candidates {
                if basis.len() >= options.dim_cap && basis.residual(cand) > tol {
                    report.hit_cap = true;
                    break 'outer;
                }
                let (res, added) = basis.try_push(cand, tol);
                note(&mut report, res, added);
                if added {
                    next.push(basis.len() - 1);
                }
            }
        }
        frontier = next;
    }
    report.dimension = basis.len();
    if basis.is_empty() {
        report.min_residual_accepted = 0.0;
    }
    Ok((basis, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::oracle::{gm_generators, x_mixer_generators, DEFAULT_ORACLE_CAP};
    use crate::problems::{maxcut_objective, Graph};
    use crate::spectrum::*;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    fn pauli(which: char) -> CMatrix {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        match which {
            'x' => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            'y' => CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
            _ => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    #[test]
    fn single_generator_is_abelian() {
        let (b, r) = lie_closure(&[pauli('x').map(|z| z * I)], &ClosureOptions::default()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(r.dimension, 1);
        assert!(!r.hit_cap);
    }

    #[test]
    fn two_paulis_generate_su2() {
        let gens = [pauli('x').map(|z| z * I), pauli('z').map(|z| z * I)];
        let (b, _) = lie_closure(&gens, &ClosureOptions::default()).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.gram_deviation() < 1e-12);
        assert!(b.skew_deviation() < 1e-12);
        assert!(b.residual(&pauli('y').map(|z| z * I)) < 1e-12);
    }

    #[test]
    fn rejects_hermitian_input() {
        assert!(lie_closure(&[pauli('x')], &ClosureOptions::default()).is_err());
    }

    #[test]
    fn cap_is_flagged() {
        let gens = [pauli('x').map(|z| z * I), pauli('z').map(|z| z * I)];
        let opts = ClosureOptions { dim_cap: 2, ..Default::default() };
        let (_, r) = lie_closure(&gens, &opts).unwrap();
        assert!(r.hit_cap);
        assert_eq!(r.dimension, 2);
    }

    fn gm(g: &Graph) -> Vec<CMatrix> {
        let f = maxcut_objective(g, DEFAULT_MAX_DIM).unwrap();
        let (h, m) = gm_generators(&f, &uniform_state(f.n(), 2).unwrap(), DEFAULT_ORACLE_CAP).unwrap();
        vec![h, m]
    }

    #[test]
    fn strategies_agree_on_small_instances() {
        for g in [Graph::path(3).unwrap(), Graph::path(4).unwrap(), Graph::cycle(4).unwrap()] {
            let gens = gm(&g);
            let a = lie_closure(&gens, &ClosureOptions::default()).unwrap().1;
            let b = lie_closure(&gens, &ClosureOptions { strategy: ClosureStrategy::AllPairs, ..Default::default() })
                .unwrap()
                .1;
            assert_eq!(a.dimension, b.dimension);
        }
    }

    #[test]
    fn closure_contains_generators() {
        let gens = gm(&Graph::path(4).unwrap());
        let (b, r) = lie_closure(&gens, &ClosureOptions::default()).unwrap();
        assert_eq!(r.dimension, 17);
        for g in &gens {
            assert!(b.residual(g) < 1e-9);
        }
        assert!(r.max_residual_discarded < 1e-12);
        assert!(r.min_residual_accepted > 1e-3);
    }

    #[test]
    fn adding_a_generator_never_shrinks() {
        let f = maxcut_objective(&Graph::path(3).unwrap(), DEFAULT_MAX_DIM).unwrap();
        let mut gens = gm(&Graph::path(3).unwrap());
        let base = lie_closure(&gens, &ClosureOptions::default()).unwrap().1.dimension;
        let (_, xb) = x_mixer_generators(&f, DEFAULT_ORACLE_CAP).unwrap();
        gens.push(xb);
        let more = lie_closure(&gens, &ClosureOptions::default()).unwrap().1.dimension;
        assert!(more >= base);
    }
}
