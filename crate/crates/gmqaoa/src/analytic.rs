//! Closed-form predictions for Grover-mixer QAOA: the dynamical Lie algebra,
//! its center, the isotypic split of the Hilbert space, the commutant
//! dimension, and the deep-circuit loss statistics.
//!
//! Everything here is derived from the level-set spectrum and the per-level
//! coefficients `c_j` of the initial state. The `oracle` module checks these
//! numbers against brute-force computations.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{LevelOverlaps, Spectrum};

/// `H_P` and `G_M` restricted to the span of the level components `xi_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedGenerators {
    /// `diag(lambda_j)` over supported levels, descending.
    pub h_p0: DMatrix<f64>,
    /// `-c c^T`.
    pub g_m0: DMatrix<f64>,
    /// Level indices labelling rows and columns.
    pub levels: Vec<usize>,
}

pub fn restricted_generators(spectrum: &Spectrum, overlaps: &LevelOverlaps) -> RestrictedGenerators {
    let levels = overlaps.supported_levels.clone();
    let d = levels.len();
    let lambda: Vec<f64> = levels.iter().map(|&j| spectrum.levels()[j].value).collect();
    let c = overlaps.supported_c();
    RestrictedGenerators {
        h_p0: DMatrix::from_fn(d, d, |i, k| if i == k { lambda[i] } else { 0.0 }),
        g_m0: DMatrix::from_fn(d, d, |i, k| -c[i] * c[k]),
        levels,
    }
}

/// Which case of the classification applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DlaBranch {
    /// `sum_j c_j != 0`: `su_d + u_1 + u_1`.
    SumNonzero,
    /// `sum_j c_j == 0`: `su_d + u_1`.
    SumZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub semisimple: String,
    pub abelian: String,
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.semisimple, self.abelian)
    }
}

/// Extra information for `d = 1`, where the generic formula may overcount.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degenerate {
    pub formula_dim: usize,
    /// Real dimension of `span{iH_P, iG_M}`; the generators commute when `d = 1`.
    pub span_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DlaPrediction {
    pub d: usize,
    pub sum_c: f64,
    pub sum_c_squared: f64,
    pub algebra: AlgebraDescriptor,
    pub dim: usize,
    pub center_dim: usize,
    pub branch: DlaBranch,
    pub degenerate: Option<Degenerate>,
}

fn branch_for(overlaps: &LevelOverlaps, tol_zero: f64) -> DlaBranch {
    if overlaps.sum_c().abs() > tol_zero {
        DlaBranch::SumNonzero
    } else {
        DlaBranch::SumZero
    }
}

/// Classification of the dynamical Lie algebra generated by `iH_P` and `iG_M`.
///
/// `overlaps` must come from [`decompose_initial_state`](crate::spectrum::decompose_initial_state),
/// which already enforces real coefficients.
pub fn predict_dla(spectrum: &Spectrum, overlaps: &LevelOverlaps, tol_zero: f64) -> DlaPrediction {
    let d = overlaps.d;
    let branch = branch_for(overlaps, tol_zero);
    let center_dim = match branch {
        DlaBranch::SumNonzero => 2,
        DlaBranch::SumZero => 1,
    };
    let dim = d * d - 1 + center_dim;
    let degenerate = (d == 1).then(|| Degenerate {
        formula_dim: dim,
        span_dim: single_level_span_dim(spectrum, overlaps),
    });
    DlaPrediction {
        d,
        sum_c: overlaps.sum_c(),
        sum_c_squared: overlaps.c.iter().map(|c| c * c).sum(),
        algebra: AlgebraDescriptor {
            semisimple: format!("su_{d}"),
            abelian: if center_dim == 2 { "u_1^2".into() } else { "u_1".into() },
        },
        dim,
        center_dim,
        branch,
        degenerate,
    }
}

// With the state inside one level set, H_P and G_M commute, so the algebra is
// their real span. They are parallel only when H_P vanishes off a single
// string that carries the whole state (or H_P = 0 outright).
fn single_level_span_dim(spectrum: &Spectrum, overlaps: &LevelOverlaps) -> usize {
    let j = overlaps.supported_levels[0];
    let others_zero = spectrum
        .levels()
        .iter()
        .enumerate()
        .all(|(k, l)| k == j || l.value == 0.0);
    let own = spectrum.levels()[j];
    if others_zero && (own.value == 0.0 || own.multiplicity == 1) {
        1
    } else {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutantPrediction {
    pub dim: u64,
}

/// `1 + sum_{supported} (n_j - 1)^2 + sum_{unsupported} n_j^2`.
pub fn predict_commutant(spectrum: &Spectrum, overlaps: &LevelOverlaps) -> CommutantPrediction {
    let dim = spectrum
        .levels()
        .iter()
        .enumerate()
        .map(|(j, l)| {
            let n = l.multiplicity as u64;
            if overlaps.component(j).is_some() {
                (n - 1) * (n - 1)
            } else {
                n * n
            }
        })
        .sum::<u64>()
        + 1;
    CommutantPrediction { dim }
}

/// Upper bound on any commutant containing `H_P`: the block-diagonal centralizer.
pub fn centralizer_dim(spectrum: &Spectrum) -> u64 {
    spectrum.levels().iter().map(|l| (l.multiplicity as u64).pow(2)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossStatsPrediction {
    pub d: usize,
    /// Mean of the uniform distribution on the supported values.
    pub zeta_mean: f64,
    pub zeta_var: f64,
    /// Squared norm of the traceless part of `rho` on the irreducible block.
    pub p_su_rho: f64,
    /// Squared norm of the traceless part of `H_P` on the irreducible block.
    pub p_su_hp: f64,
    pub l1: f64,
    pub l2: f64,
    /// `zeta_var / (d + 1)`.
    pub loss_variance: f64,
    /// `l1 / d^2`, only stated for a two-dimensional center.
    pub expected_loss: Option<f64>,
    pub center_dim: usize,
}

pub fn predict_loss_stats(spectrum: &Spectrum, overlaps: &LevelOverlaps, tol_zero: f64) -> LossStatsPrediction {
    let lambda: Vec<f64> = overlaps
        .supported_levels
        .iter()
        .map(|&j| spectrum.levels()[j].value)
        .collect();
    let d = lambda.len();
    let df = d as f64;
    let l1: f64 = lambda.iter().sum();
    let l2: f64 = lambda.iter().map(|v| v * v).sum();
    let zeta_mean = l1 / df;
    let zeta_var = lambda.iter().map(|v| (v - zeta_mean).powi(2)).sum::<f64>() / df;
    let center_dim = match branch_for(overlaps, tol_zero) {
        DlaBranch::SumNonzero => 2,
        DlaBranch::SumZero => 1,
    };
    LossStatsPrediction {
        d,
        zeta_mean,
        zeta_var,
        p_su_rho: 1.0 - 1.0 / df,
        p_su_hp: df * zeta_var,
        l1,
        l2,
        loss_variance: zeta_var / (df + 1.0),
        expected_loss: (center_dim == 2).then(|| l1 / (df * df)),
        center_dim,
    }
}

/// `(dim W_0, number of invariant lines)` = `(d, q^n - d)`.
pub fn isotypic_summary(spectrum: &Spectrum, overlaps: &LevelOverlaps) -> (usize, usize) {
    (overlaps.d, spectrum.dim() - overlaps.d)
}

pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    (0..k).try_fold(1u64, |acc, i| acc.checked_mul(n - i).map(|v| v / (i + 1)))
}

/// Range-size bound `m T + 1` for an `s`-local objective with `T` terms valued in `0..=m`.
pub fn slocal_bound(n: u64, s: u64, m: u64, terms: u64) -> Result<u64> {
    if let Some(max_terms) = binomial(n, s) {
        if terms > max_terms {
            return Err(Error::Invalid(format!("{terms} terms exceed C({n}, {s}) = {max_terms}")));
        }
    }
    m.checked_mul(terms)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::Invalid("bound overflows u64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{maxcut_objective, Graph};
    use crate::spectrum::*;
    use proptest::prelude::*;

    fn uniform_case(g: &Graph) -> (Spectrum, LevelOverlaps) {
        let f = maxcut_objective(g, DEFAULT_MAX_DIM).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&uniform_state(f.n(), 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        (s, o)
    }

    #[test]
    fn restricted_generators_p3() {
        let (s, o) = uniform_case(&Graph::path(3).unwrap());
        let r = restricted_generators(&s, &o);
        assert_eq!(r.h_p0, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 1.0, 0.0])));
        assert!((r.g_m0[(0, 1)] + 8f64.sqrt() / 8.0).abs() < 1e-15);
        let n = [2.0, 4.0, 2.0];
        for i in 0..3 {
            for k in 0..3 {
                assert!((r.g_m0[(i, k)] + (n[i] * n[k] as f64).sqrt() / 8.0).abs() < 1e-15);
            }
        }
        assert!((r.g_m0.trace() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn restricted_generator_single_level() {
        let f = ObjectiveTable::new(1, 2, vec![3.0, 3.0]).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&uniform_state(1, 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        let r = restricted_generators(&s, &o);
        assert!((r.g_m0[(0, 0)] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn dla_house_and_paths() {
        let p = predict_dla(&uniform_case(&Graph::house()).0, &uniform_case(&Graph::house()).1, DEFAULT_TOL_ZERO);
        assert_eq!((p.d, p.dim, p.center_dim), (5, 26, 2));
        for n in 2..=7 {
            let (s, o) = uniform_case(&Graph::path(n).unwrap());
            let p = predict_dla(&s, &o, DEFAULT_TOL_ZERO);
            assert_eq!(p.dim, n * n + 1);
            assert_eq!(p.branch, DlaBranch::SumNonzero);
            assert!(p.degenerate.is_none());
        }
    }

    #[test]
    fn dla_sum_zero_toy() {
        let f = ObjectiveTable::new(1, 2, vec![1.0, 0.0]).unwrap();
        let s = build_spectrum(&f);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let st = InitialState::new(vec![h.into(), (-h).into()], 1e-12).unwrap();
        let o = decompose_initial_state(&st, &s, DEFAULT_TOL_ZERO).unwrap();
        let p = predict_dla(&s, &o, DEFAULT_TOL_ZERO);
        assert_eq!(p.branch, DlaBranch::SumZero);
        assert_eq!(p.dim, 4);
        assert_eq!(p.center_dim, 1);
        assert!((p.sum_c_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dla_degenerate_flag() {
        let f = maxcut_objective(&Graph::path(3).unwrap(), DEFAULT_MAX_DIM).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&InitialState::basis(8, 0).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        let p = predict_dla(&s, &o, DEFAULT_TOL_ZERO);
        assert_eq!(p.degenerate, Some(Degenerate { formula_dim: 2, span_dim: 2 }));

        // F vanishes everywhere except on the basis string holding the state
        let f = ObjectiveTable::new(2, 2, vec![0.0, 0.0, 0.0, 4.0]).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&InitialState::basis(4, 3).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(predict_dla(&s, &o, DEFAULT_TOL_ZERO).degenerate.unwrap().span_dim, 1);

        let f = ObjectiveTable::new(1, 2, vec![0.0, 0.0]).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&uniform_state(1, 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(predict_dla(&s, &o, DEFAULT_TOL_ZERO).degenerate.unwrap().span_dim, 1);
    }

    #[test]
    fn commutant_examples() {
        let (s, o) = uniform_case(&Graph::path(3).unwrap());
        assert_eq!(predict_commutant(&s, &o).dim, 12);
        let (s, o) = uniform_case(&Graph::cycle(4).unwrap());
        assert_eq!(predict_commutant(&s, &o).dim, 124);

        let f = ObjectiveTable::new(1, 2, vec![0.0, 1.0]).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&uniform_state(1, 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(predict_commutant(&s, &o).dim, 1);

        let f = maxcut_objective(&Graph::path(3).unwrap(), DEFAULT_MAX_DIM).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&InitialState::basis(8, 0).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(predict_commutant(&s, &o).dim, 22);
    }

    #[test]
    fn loss_stats_paths() {
        let (s, o) = uniform_case(&Graph::path(4).unwrap());
        let p = predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO);
        assert!((p.zeta_var - 1.25).abs() < 1e-15);
        assert!((p.loss_variance - 0.25).abs() < 1e-15);
        assert!((p.expected_loss.unwrap() - 0.375).abs() < 1e-15);

        let (s, o) = uniform_case(&Graph::path(3).unwrap());
        let p = predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO);
        assert!((p.loss_variance - 1.0 / 6.0).abs() < 1e-15);
        assert!((p.expected_loss.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.p_su_rho - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn loss_stats_constant_and_sum_zero() {
        let f = ObjectiveTable::new(2, 2, vec![2.0; 4]).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&uniform_state(2, 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO).loss_variance, 0.0);

        let f = ObjectiveTable::new(1, 2, vec![1.0, 0.0]).unwrap();
        let s = build_spectrum(&f);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let st = InitialState::new(vec![h.into(), (-h).into()], 1e-12).unwrap();
        let o = decompose_initial_state(&st, &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO).expected_loss, None);
    }

    #[test]
    fn isotypic() {
        let (s, o) = uniform_case(&Graph::path(3).unwrap());
        assert_eq!(isotypic_summary(&s, &o), (3, 5));
        let (s, o) = uniform_case(&Graph::house());
        assert_eq!(isotypic_summary(&s, &o), (5, 27));
        let f = ObjectiveTable::new(2, 2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&uniform_state(2, 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(isotypic_summary(&s, &o), (4, 0));
    }

    #[test]
    fn slocal() {
        let g = Graph::house();
        assert_eq!(slocal_bound(5, 2, 1, g.edge_count() as u64).unwrap(), 7);
        assert_eq!(slocal_bound(6, 2, 1, 0).unwrap(), 1);
        // m-SAT with the maximal clause count C(n, m) 2^m
        let (n, m) = (6u64, 3u64);
        let c = binomial(n, m).unwrap() * (1 << m);
        assert_eq!(c, 160);
        assert!(slocal_bound(5, 2, 1, 11).is_err());
        assert_eq!(binomial(10, 3), Some(120));
    }

    proptest! {
        #[test]
        fn loss_identities(values in prop::collection::vec(-50i32..50, 1..12)) {
            let mut vals: Vec<f64> = values.iter().map(|&v| f64::from(v) / 4.0).collect();
            vals.sort_by(|a, b| b.total_cmp(a));
            vals.dedup();
            // injective table padded with copies of the smallest value to fill 2^n entries
            let mut n = 1;
            while (1usize << n) < vals.len() { n += 1; }
            let mut table = vals.clone();
            table.resize(1 << n, *vals.last().unwrap());
            let f = ObjectiveTable::new(n, 2, table).unwrap();
            let s = build_spectrum(&f);
            let o = decompose_initial_state(&uniform_state(n, 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
            let p = predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO);
            let d = p.d as f64;
            let mut pair = 0.0;
            for i in 0..vals.len() { for j in i + 1..vals.len() { pair += (vals[i] - vals[j]).powi(2); } }
            prop_assert!((p.p_su_hp - pair / d).abs() < 1e-9);
            prop_assert!((p.p_su_hp - (p.l2 - p.l1 * p.l1 / d)).abs() < 1e-9);
            prop_assert!((p.zeta_var - pair / (d * d)).abs() < 1e-9);
            prop_assert!((p.loss_variance * (d + 1.0) - p.zeta_var).abs() <= 4.0 * f64::EPSILON * p.zeta_var.max(1.0));
            let dla = predict_dla(&s, &o, DEFAULT_TOL_ZERO);
            prop_assert_eq!(dla.dim, p.d * p.d + 1);
            let comm = predict_commutant(&s, &o).dim;
            prop_assert!(comm <= centralizer_dim(&s));
        }
    }
}
