//! Complex dimension of the commutant `{X : [X, B_k] = 0 for all k}`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{CMatrix, DEFAULT_ORACLE_CAP};
use crate::error::{Error, Result};

/// Eigenvalues of the normal operator below this, relative to its largest
/// eigenvalue, count as null directions.
pub const DEFAULT_TOL_RANK: f64 = 1e-8;

/// Nullity of `M = sum_k ad_{B_k}^dagger ad_{B_k}` on `N x N` complex matrices.
///
/// With column-major vectorization `ad_B = I (x) B - B^T (x) I`, so
/// `M = I (x) S1 + S2 (x) I - sum_k (B_k^T (x) B_k^dagger + conj(B_k) (x) B_k)`
/// with `S1 = sum B^dagger B` and `S2 = sum conj(B) B^T`. When every `B_k` is
/// purely real or purely imaginary, `M` is real symmetric and the cheaper
/// real eigensolver is used.
///
/// Passing a generating set gives the same answer as passing a full basis
/// of the algebra it generates.
pub fn commutant_dimension(elements: &[CMatrix], tol_rank: f64) -> Result<usize> {
    let Some(first) = elements.first() else {
        return Err(Error::Invalid("commutant of an empty set".into()));
    };
    let n = first.nrows();
    if n > DEFAULT_ORACLE_CAP {
        return Err(Error::OracleCap { dim: n, cap: DEFAULT_ORACLE_CAP });
    }
    for b in elements {
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.nrows().max(b.ncols()) });
        }
    }
    let nn = n * n;
    let mut s1 = CMatrix::zeros(n, n);
    let mut s2 = CMatrix::zeros(n, n);
    for b in elements {
        s1 += b.adjoint() * b;
        s2 += b.conjugate() * b.transpose();
    }

    // Row (a*n + b) of M; a, c index the column block, b, d the row within it.
    let row = |idx: usize| -> Vec<Complex64> {
        let (a, bb) = (idx / n, idx % n);
        let mut out = vec![Complex64::new(0.0, 0.0); nn];
        for c in 0..n {
            for d in 0..n {
                let mut v = Complex64::new(0.0, 0.0);
                if a == c {
                    v += s1[(bb, d)];
                }
                if bb == d {
                    v += s2[(a, c)];
                }
                for m in elements {
                    v -= m[(c, a)] * m[(d, bb)].conj() + m[(a, c)].conj() * m[(bb, d)];
                }
                out[c * n + d] = v;
            }
        }
        out
    };
    let rows: Vec<Vec<Complex64>> = (0..nn).into_par_iter().map(row).collect();

    let real = rows.iter().flatten().all(|z| z.im == 0.0) || is_real_case(elements);
    let mut eig: Vec<f64> = if real {
        let m = DMatrix::<f64>::from_fn(nn, nn, |r, c| rows[r][c].re);
        let m = (&m + m.transpose()) * 0.5;
        SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
    } else {
        let m = CMatrix::from_fn(nn, nn, |r, c| rows[r][c]);
        let m = (&m + m.adjoint()).map(|z| z * 0.5);
        SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
    };
    eig.sort_by(f64::total_cmp);
    let top = eig.last().copied().unwrap_or(0.0).abs().max(f64::MIN_POSITIVE);
    Ok(eig.iter().filter(|&&e| e <= tol_rank * top).count())
}

fn is_real_case(elements: &[CMatrix]) -> bool {
    elements.iter().all(|b| b.iter().all(|z| z.im == 0.0) || b.iter().all(|z| z.re == 0.0))
}
