//! Brute-force numerical checks of the analytic predictions.
//!
//! The closure works over the *real* span of skew-Hermitian matrices and
//! reports real dimensions. The commutant solver works over *complex*
//! matrices and reports complex dimensions. Mixing the two conventions is the
//! easiest way to get an off-by-a-factor answer, so keep them apart.

mod closure;
mod commutant;
mod units;

pub use closure::{lie_closure, ClosureOptions, ClosureReport, ClosureStrategy, OperatorBasis};
pub use commutant::{commutant_dimension, DEFAULT_TOL_RANK};
pub use units::{extract_matrix_units, frame_condition, MatrixUnits};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{InitialState, LevelOverlaps, ObjectiveTable, Spectrum};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest Hilbert-space dimension the dense oracles accept by default.
pub const DEFAULT_ORACLE_CAP: usize = 64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        Err(Error::OracleCap { dim, cap })
    } else {
        Ok(())
    }
}

/// `(iH_P, iG_M)` with `H_P = diag(F)` and `G_M = -|xi><xi|`.
pub fn gm_generators(objective: &ObjectiveTable, state: &InitialState, cap: usize) -> Result<(CMatrix, CMatrix)> {
    let n = objective.dim();
    check_cap(n, cap)?;
    if state.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: state.dim() });
    }
    let h = CMatrix::from_fn(n, n, |r, c| if r == c { I * objective.value(r) } else { Complex64::new(0.0, 0.0) });
    let xi = state.amplitudes();
    let g = CMatrix::from_fn(n, n, |r, c| -I * xi[r] * xi[c].conj());
    Ok((h, g))
}

/// `B = sum_j X_j` on `n` qubits.
pub fn x_mixer_generator(n: usize, q: usize, cap: usize) -> Result<DMatrix<f64>> {
    if q != 2 {
        return Err(Error::Invalid(format!("the X mixer needs a binary alphabet, got q = {q}")));
    }
    let dim = crate::spectrum::dense_dim(n, 2, cap).map_err(|_| Error::OracleCap {
        dim: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
        cap,
    })?;
    let mut b = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for j in 0..n {
            b[(x ^ (1 << j), x)] = 1.0;
        }
    }
    Ok(b)
}

/// `(i(H_P - tr(H_P)/N), iB)` for the standard transverse-field mixer.
///
/// The cost Hamiltonian is centered so that the result matches the usual
/// `sum Z_i Z_j` form; a trace part would add one central dimension.
pub fn x_mixer_generators(objective: &ObjectiveTable, cap: usize) -> Result<(CMatrix, CMatrix)> {
    let n = objective.dim();
    check_cap(n, cap)?;
    let mean = objective.values().iter().sum::<f64>() / n as f64;
    let h = CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            I * (objective.value(r) - mean)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let b = x_mixer_generator(objective.n(), objective.q(), cap)?;
    Ok((h, b.map(|v| I * v)))
}

/// Orthonormal basis `{xi_j}` of the irreducible block `W_0`.
pub fn w0_basis(spectrum: &Spectrum, overlaps: &LevelOverlaps) -> Vec<CVector> {
    overlaps
        .supported_levels
        .iter()
        .map(|&j| CVector::from_vec(overlaps.component_dense(spectrum, j).expect("supported")))
        .collect()
}

/// Orthonormal basis of the complement of `W_0`, one vector per invariant line.
///
/// For a supported level the lines span the part of the level block
/// orthogonal to `xi_j`; unsupported levels contribute their basis strings.
pub fn complement_lines(spectrum: &Spectrum, overlaps: &LevelOverlaps) -> Vec<CVector> {
    let dim = spectrum.dim();
    let mut out = Vec::with_capacity(dim - overlaps.d);
    for j in 0..spectrum.r() {
        let members = spectrum.members(j);
        let unit = |x: usize| {
            let mut v = CVector::zeros(dim);
            v[x] = Complex64::new(1.0, 0.0);
            v
        };
        match overlaps.component_dense(spectrum, j) {
            None => out.extend(members.iter().map(|&x| unit(x))),
            Some(xi) => {
                let mut local = vec![CVector::from_vec(xi)];
                for &x in members {
                    if local.len() == members.len() {
                        break;
                    }
                    let mut v = unit(x);
                    for _ in 0..2 {
                        for u in &local {
                            let proj = u.dotc(&v);
                            v.axpy(-proj, u, Complex64::new(1.0, 0.0));
                        }
                    }
                    let nrm = v.norm();
                    if nrm > 1e-8 {
                        local.push(v.unscale(nrm));
                    }
                }
                out.extend(local.into_iter().skip(1));
            }
        }
    }
    out
}

/// Largest norm of the part of `B v` lying outside `span(subspace)`, over
/// basis elements `B` and subspace vectors `v`.
pub fn invariant_subspace_residual(basis: &OperatorBasis, subspace: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for b in basis.elements() {
        for v in subspace {
            let mut w = b * v;
            for u in subspace {
                let proj = u.dotc(&w);
                w.axpy(-proj, u, Complex64::new(1.0, 0.0));
            }
            worst = worst.max(w.norm());
        }
    }
    worst
}

/// Largest `|| B v - <v, B v> v ||`: zero iff every line is a common eigenline.
pub fn eigenline_residual(basis: &OperatorBasis, lines: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for b in basis.elements() {
        for v in lines {
            let mut w = b * v;
            let ev = v.dotc(&w);
            w.axpy(-ev, v, Complex64::new(1.0, 0.0));
            worst = worst.max(w.norm());
        }
    }
    worst
}
