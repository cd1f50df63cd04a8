//! Constructive extraction of matrix units from a diagonal `D` and a frame matrix `A`.
//!
//! Every operator used here is an element of the algebra generated by `D`
//! and `A`: selector masks stand in for polynomials in `ad_D` (or in `ad_H`
//! for a refined diagonal `H` of the algebra), and everything else is a
//! commutator or a linear combination.

use num_complex::Complex64;
use serde::Serialize;

use super::CMatrix;
use crate::error::{Error, Result};

#[cfg(test)]
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Fixed weights for the refinement pool; irrational so that accidental
/// coincidences of differences are not reintroduced.
const REFINE_WEIGHTS: [f64; 5] = [0.6180339887, 0.4142135624, 0.7320508076, 0.2360679775, 0.1622776602];

/// Off-diagonal matrix units, indexed from zero.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixUnits {
    pub d: usize,
    #[serde(skip)]
    pub units: Vec<(usize, usize, CMatrix)>,
    /// Largest entrywise deviation from the exact units.
    pub max_deviation: f64,
    /// Whether some selector needed a refined diagonal.
    pub refined: bool,
}

impl MatrixUnits {
    pub fn get(&self, i: usize, j: usize) -> Option<&CMatrix> {
        self.units.iter().find(|(a, b, _)| *a == i && *b == j).map(|(_, _, m)| m)
    }
}

/// Nonvanishing of the first/last row and column entries, corners excluded.
pub fn frame_condition(a: &CMatrix, tol_zero: f64) -> bool {
    first_frame_violation(a, tol_zero).is_none()
}

fn first_frame_violation(a: &CMatrix, tol_zero: f64) -> Option<(usize, usize)> {
    let k = a.nrows();
    if k < 3 {
        return None;
    }
    let last = k - 1;
    for j in 1..last {
        for (r, c) in [(0, j), (j, 0), (j, last), (last, j)] {
            if !(a[(r, c)].norm() > tol_zero) {
                return Some((r, c));
            }
        }
    }
    None
}

fn unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut e = CMatrix::zeros(d, d);
    e[(i, j)] = ONE;
    e
}

fn bracket(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn diag_part(m: &CMatrix) -> Vec<f64> {
    // Diagonals in the pool are real up to rounding for the real inputs we
    // care about; the real part is what enters `ad_H` as a Cartan element.
    (0..m.nrows()).map(|k| m[(k, k)].re).collect()
}

/// Diagonal `h` of a Cartan element together with its comparison rule.
struct Selector {
    h: Vec<f64>,
    exact: bool,
    tol: f64,
}

impl Selector {
    fn new(h: Vec<f64>) -> Self {
        let exact = h.iter().all(|v| v.fract() == 0.0 && v.abs() < 2f64.powi(52));
        let scale = h.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        Selector { h, exact, tol: 1e-9 * scale }
    }

    fn same(&self, x: f64, y: f64) -> bool {
        if self.exact {
            x == y
        } else {
            (x - y).abs() <= self.tol
        }
    }

    fn diff(&self, k: usize, l: usize) -> f64 {
        self.h[k] - self.h[l]
    }

    /// Entrywise mask keeping the entries whose difference equals that of `(i, j)`.
    /// The diagonal is always dropped (the selector vanishes at zero).
    fn apply(&self, m: &CMatrix, i: usize, j: usize) -> (CMatrix, Option<(usize, usize)>, f64) {
        let d = m.nrows();
        let target = self.diff(i, j);
        let mut out = CMatrix::zeros(d, d);
        let mut clash = None;
        let mut clash_mag: f64 = 0.0;
        for k in 0..d {
            for l in 0..d {
                if k != l && self.same(self.diff(k, l), target) {
                    out[(k, l)] = m[(k, l)];
                    if (k, l) != (i, j) && m[(k, l)].norm() > clash_mag {
                        clash_mag = m[(k, l)].norm();
                        clash = Some((k, l));
                    }
                }
            }
        }
        (out, clash, clash_mag)
    }
}

/// Recover all `d^2 - d` off-diagonal matrix units from `D = diag(diag)` and `A`.
///
/// `diag` must be strictly decreasing and `A` must satisfy the frame
/// condition with nonzero corners `A_{1d}`, `A_{d1}`. Intermediate selectors
/// that cannot separate their target under `ad_D` are retried with
/// `H = D + sum t_m H_m`, where the `H_m` are diagonal elements of the
/// generated algebra; if none separates, the call fails with
/// `AmbiguousSelector`.
pub fn extract_matrix_units(diag: &[f64], a: &CMatrix, tol: f64) -> Result<MatrixUnits> {
    let d = diag.len();
    if d < 2 {
        return Err(Error::Invalid("matrix units need d >= 2".into()));
    }
    if a.nrows() != d || a.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, got: a.nrows().max(a.ncols()) });
    }
    if diag.iter().any(|v| !v.is_finite()) || diag.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::Invalid("diagonal must be finite and strictly decreasing".into()));
    }
    if let Some((row, col)) = first_frame_violation(a, tol) {
        return Err(Error::FrameCondition { row, col });
    }
    let last = d - 1;
    let base = Selector::new(diag.to_vec());

    let corner = |i: usize, j: usize| -> Result<CMatrix> {
        let (m, clash, mag) = base.apply(a, i, j);
        if clash.is_some() && mag > tol {
            return Err(Error::AmbiguousSelector { i, j, detail: "extreme difference not unique".into() });
        }
        let pivot = a[(i, j)];
        if !(pivot.norm() > tol) {
            return Err(Error::ZeroPivot { i, j });
        }
        Ok(m.map(|z| z / pivot))
    };
    let e_1d = corner(0, last)?;
    let e_d1 = corner(last, 0)?;

    let mut units: Vec<(usize, usize, CMatrix)> = vec![(0, last, e_1d.clone()), (last, 0, e_d1.clone())];
    let mut refined = false;

    if d > 2 {
        let shift = a[(0, 0)] - a[(last, last)];
        // R = sum_{j<d} A_dj E_1j - sum_{i>1} A_i1 E_id
        let r = bracket(&e_1d, a) + e_1d.map(|z| z * shift);
        // L = sum_{i<d} A_id E_i1 - sum_{j>1} A_1j E_dj
        let l = bracket(a, &e_d1) + e_d1.map(|z| z * shift);

        let pool = [
            diag_part(a),
            diag_part(&bracket(&e_1d, &e_d1)),
            diag_part(&bracket(&r, &l)),
            diag_part(&bracket(a, &r)),
            diag_part(&bracket(a, &l)),
        ];
        let mut selectors = vec![base];
        let mut h = diag.to_vec();
        for (w, p) in REFINE_WEIGHTS.iter().zip(&pool) {
            let scale = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                continue;
            }
            for (hk, pk) in h.iter_mut().zip(p) {
                *hk += w * pk / scale;
            }
            selectors.push(Selector::new(h.clone()));
        }

        let mut select = |src: &CMatrix, i: usize, j: usize, coeff: Complex64| -> Result<CMatrix> {
            let mut worst = None;
            for (level, sel) in selectors.iter().enumerate() {
                let (m, clash, mag) = sel.apply(src, i, j);
                if clash.is_none() || mag <= tol {
                    if level > 0 {
                        refined = true;
                    }
                    if !(coeff.norm() > tol) {
                        return Err(Error::ZeroPivot { i, j });
                    }
                    return Ok(m.map(|z| z / coeff));
                }
                if worst.is_none() {
                    worst = clash;
                }
            }
            let (k, l) = worst.unwrap_or((i, j));
            Err(Error::AmbiguousSelector {
                i,
                j,
                detail: format!("entry ({k}, {l}) shares the eigenvalue difference under every refinement"),
            })
        };

        let mut row1 = vec![None; d];
        let mut col1 = vec![None; d];
        for j in 1..last {
            row1[j] = Some(select(&r, 0, j, a[(last, j)])?);
            let e_jd = select(&r, j, last, -a[(j, 0)])?;
            col1[j] = Some(select(&l, j, 0, a[(j, last)])?);
            let e_dj = select(&l, last, j, -a[(0, j)])?;
            units.push((0, j, row1[j].clone().unwrap()));
            units.push((j, last, e_jd));
            units.push((j, 0, col1[j].clone().unwrap()));
            units.push((last, j, e_dj));
        }
        row1[last] = Some(e_1d.clone());
        col1[last] = Some(e_d1.clone());
        for i in 1..d {
            for j in 1..d {
                if i == j || (i == last && j < last && j > 0) || (j == last && i < last) {
                    continue;
                }
                let e = bracket(col1[i].as_ref().unwrap(), row1[j].as_ref().unwrap());
                units.push((i, j, e));
            }
        }
    }

    units.sort_by_key(|(i, j, _)| (*i, *j));
    let max_deviation = units
        .iter()
        .map(|(i, j, m)| (m - unit(d, *i, *j)).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    Ok(MatrixUnits { d, units, max_deviation, refined })
}
