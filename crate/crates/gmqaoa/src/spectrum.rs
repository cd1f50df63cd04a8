//! Objective tables, their level-set spectra, and the decomposition of an
//! initial state along those level sets.
//!
//! Strings over a `q`-ary alphabet on `n` sites are encoded as integers with
//! site 0 as the least significant base-`q` digit. Every dense table in the
//! crate is indexed this way.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of dense entries `q^n`.
pub const DEFAULT_MAX_DIM: usize = 1 << 20;
/// Projection norm at or below which a level counts as unsupported.
pub const DEFAULT_TOL_ZERO: f64 = 1e-10;
/// Tolerance for unit-norm checks.
pub const DEFAULT_TOL_NORM: f64 = 1e-9;

/// Returns `q^n` if it fits under `limit`.
pub fn dense_dim(n: usize, q: usize, limit: usize) -> Result<usize> {
    let exp = u32::try_from(n).map_err(|_| Error::SizeLimit { n, q, limit })?;
    match q.checked_pow(exp) {
        Some(dim) if dim <= limit => Ok(dim),
        _ => Err(Error::SizeLimit { n, q, limit }),
    }
}

/// Dense real objective over all `q^n` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveTable {
    n: usize,
    q: usize,
    values: Vec<f64>,
}

impl ObjectiveTable {
    pub fn new(n: usize, q: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidObjective("site count must be at least 1".into()));
        }
        if q < 2 {
            return Err(Error::InvalidObjective(format!("alphabet size {q} < 2")));
        }
        let expected = dense_dim(n, q, usize::MAX)?;
        if values.len() != expected {
            return Err(Error::InvalidObjective(format!(
                "expected {expected} values for q={q}, n={n}, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidObjective(format!("value at index {pos} is not finite")));
        }
        Ok(Self { n, q, values })
    }

    /// Builds a table by evaluating `f` on the digit vector of every string.
    pub fn from_fn(n: usize, q: usize, limit: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let dim = dense_dim(n, q, limit)?;
        let mut digits = vec![0usize; n];
        let mut values = Vec::with_capacity(dim);
        for _ in 0..dim {
            values.push(f(&digits));
            // base-q increment, site 0 first
            for d in digits.iter_mut() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        Self::new(n, q, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Base-`q` digits of `index`, site 0 first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            out.push(index % self.q);
            index /= self.q;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * self.q + d)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

/// Distinct objective values in strictly descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    n: usize,
    q: usize,
    levels: Vec<Level>,
    level_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Spectrum {
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of distinct values.
    pub fn r(&self) -> usize {
        self.levels.len()
    }

    /// Total dimension `q^n`.
    pub fn dim(&self) -> usize {
        self.level_of.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn level_of(&self, index: usize) -> usize {
        self.level_of[index]
    }

    /// String indices of level `j`, ascending.
    pub fn members(&self, j: usize) -> &[usize] {
        &self.members[j]
    }

    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.multiplicity).collect()
    }
}

/// Groups strings by exact equality of their objective values.
pub fn build_spectrum(objective: &ObjectiveTable) -> Spectrum {
    build_spectrum_with_tolerance(objective, 0.0)
}

/// Like [`build_spectrum`], but values within `tol_level` of a level's
/// largest member are merged into it. The level keeps that largest value.
/// Choosing a sensible tolerance for real-valued tables is up to the caller.
pub fn build_spectrum_with_tolerance(objective: &ObjectiveTable, tol_level: f64) -> Spectrum {
    let values = objective.values();
    let mut order: Vec<usize> = (0..values.len()).collect();
    // descending by value, ties by index so members stay sorted after the regroup
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut levels: Vec<Level> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut level_of = vec![0usize; values.len()];
    for idx in order {
        let v = values[idx];
        let start_new = match levels.last() {
            None => true,
            Some(last) => last.value - v > tol_level || (tol_level == 0.0 && last.value != v),
        };
        if start_new {
            levels.push(Level { value: v, multiplicity: 0 });
            members.push(Vec::new());
        }
        let j = levels.len() - 1;
        levels[j].multiplicity += 1;
        members[j].push(idx);
        level_of[idx] = j;
    }
    for m in &mut members {
        m.sort_unstable();
    }
    Spectrum {
        n: objective.n(),
        q: objective.q(),
        levels,
        level_of,
        members,
    }
}

/// A normalized complex state vector used as the QAOA initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    amplitudes: Vec<Complex64>,
    norm: f64,
}

impl InitialState {
    pub fn new(amplitudes: Vec<Complex64>, tol_norm: f64) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > tol_norm {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes, norm })
    }

    /// Normalizes `amplitudes` first; fails only on a zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes, DEFAULT_TOL_NORM)
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, got: index + 1 });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps, DEFAULT_TOL_NORM)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

/// The uniform superposition over all `q^n` strings.
pub fn uniform_state(n: usize, q: usize) -> Result<InitialState> {
    uniform_state_with_limit(n, q, DEFAULT_MAX_DIM)
}

pub fn uniform_state_with_limit(n: usize, q: usize, limit: usize) -> Result<InitialState> {
    let dim = dense_dim(n, q, limit)?;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    InitialState::new(vec![amp; dim], DEFAULT_TOL_NORM)
}

/// Per-level coefficients `c_j` and unit components `xi_j` of an initial state.
///
/// Phase convention: `xi_j` is the normalized projection onto level `j` with
/// its lowest-index nonzero amplitude made real positive, and `c_j` is the
/// real signed weight so that `state = global_phase * sum_j c_j xi_j`.
/// `global_phase` is 1 unless the raw phases were not all real, in which
/// case it is the phase of the state's first nonzero amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelOverlaps {
    pub c: Vec<f64>,
    components: Vec<Option<Vec<Complex64>>>,
    pub d: usize,
    pub supported_levels: Vec<usize>,
    pub global_phase: Complex64,
}

impl LevelOverlaps {
    /// Amplitudes of `xi_j` over `spectrum.members(j)`, if level `j` is supported.
    pub fn component(&self, j: usize) -> Option<&[Complex64]> {
        self.components[j].as_deref()
    }

    /// `xi_j` as a dense vector of length `q^n`.
    pub fn component_dense(&self, spectrum: &Spectrum, j: usize) -> Option<Vec<Complex64>> {
        let comp = self.component(j)?;
        let mut out = vec![Complex64::new(0.0, 0.0); spectrum.dim()];
        for (&idx, &a) in spectrum.members(j).iter().zip(comp) {
            out[idx] = a;
        }
        Some(out)
    }

    /// `global_phase * sum_j c_j xi_j`.
    pub fn reconstruct(&self, spectrum: &Spectrum) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); spectrum.dim()];
        for &j in &self.supported_levels {
            let comp = self.components[j].as_ref().expect("supported level has a component");
            for (&idx, &a) in spectrum.members(j).iter().zip(comp) {
                out[idx] = self.global_phase * a * self.c[j];
            }
        }
        out
    }

    /// Coefficients restricted to supported levels, in descending-value order.
    pub fn supported_c(&self) -> Vec<f64> {
        self.supported_levels.iter().map(|&j| self.c[j]).collect()
    }

    pub fn sum_c(&self) -> f64 {
        self.supported_levels.iter().map(|&j| self.c[j]).sum()
    }
}

/// Splits `state` along the level sets of `spectrum`.
///
/// Fails with [`Error::ComplexOverlap`] when the level phases cannot be made
/// simultaneously real, even after removing a global phase.
pub fn decompose_initial_state(state: &InitialState, spectrum: &Spectrum, tol_zero: f64) -> Result<LevelOverlaps> {
    if state.dim() != spectrum.dim() {
        return Err(Error::DimensionMismatch {
            expected: spectrum.dim(),
            got: state.dim(),
        });
    }
    let amps = state.amplitudes();
    let r = spectrum.r();
    let mut norms = vec![0.0; r];
    let mut phases = vec![Complex64::new(1.0, 0.0); r];
    let mut components: Vec<Option<Vec<Complex64>>> = vec![None; r];
    let mut supported = Vec::new();

    for j in 0..r {
        let members = spectrum.members(j);
        let norm = members.iter().map(|&i| amps[i].norm_sqr()).sum::<f64>().sqrt();
        if norm <= tol_zero {
            continue;
        }
        let lead = members
            .iter()
            .map(|&i| amps[i])
            .find(|a| a.norm() > tol_zero)
            .unwrap_or_else(|| amps[members[0]]);
        let phase = lead / lead.norm();
        let unphase = phase.conj() / norm;
        components[j] = Some(members.iter().map(|&i| amps[i] * unphase).collect());
        norms[j] = norm;
        phases[j] = phase;
        supported.push(j);
    }

    let is_real = |p: &Complex64| p.im.abs() <= DEFAULT_TOL_NORM;
    let mut global_phase = Complex64::new(1.0, 0.0);
    if !supported.iter().all(|&j| is_real(&phases[j])) {
        let first = amps
            .iter()
            .find(|a| a.norm() > tol_zero)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        global_phase = first / first.norm();
        for &j in &supported {
            phases[j] *= global_phase.conj();
        }
        if let Some(&bad) = supported.iter().find(|&&j| !is_real(&phases[j])) {
            return Err(Error::ComplexOverlap {
                level: bad,
                phase_re: phases[bad].re,
                phase_im: phases[bad].im,
            });
        }
    }

    let c = (0..r)
        .map(|j| if components[j].is_some() { norms[j] * phases[j].re.signum() } else { 0.0 })
        .collect();
    Ok(LevelOverlaps {
        c,
        components,
        d: supported.len(),
        supported_levels: supported,
        global_phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3_cut() -> ObjectiveTable {
        ObjectiveTable::from_fn(3, 2, DEFAULT_MAX_DIM, |x| {
            ((x[0] != x[1]) as u8 + (x[1] != x[2]) as u8) as f64
        })
        .unwrap()
    }

    fn brute_levels(values: &[f64]) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &v in values {
            match out.iter_mut().find(|(w, _)| *w == v) {
                Some(e) => e.1 += 1,
                None => out.push((v, 1)),
            }
        }
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        out
    }

    #[test]
    fn p3_levels_match_enumeration() {
        let obj = p3_cut();
        let s = build_spectrum(&obj);
        let got: Vec<(f64, usize)> = s.levels().iter().map(|l| (l.value, l.multiplicity)).collect();
        assert_eq!(got, vec![(2.0, 2), (1.0, 4), (0.0, 2)]);
        assert_eq!(got, brute_levels(obj.values()));
        assert_eq!(s.r(), 3);
        assert_eq!(s.members(0), &[2, 5]);
    }

    #[test]
    fn constant_objective_has_one_level() {
        let obj = ObjectiveTable::new(2, 2, vec![5.0; 4]).unwrap();
        let s = build_spectrum(&obj);
        assert_eq!(s.levels(), &[Level { value: 5.0, multiplicity: 4 }]);
    }

    #[test]
    fn tolerance_merges_nearby_values() {
        let obj = ObjectiveTable::new(2, 2, vec![1.0, 1.0 + 1e-12, 0.0, 0.5]).unwrap();
        assert_eq!(build_spectrum(&obj).r(), 4);
        let s = build_spectrum_with_tolerance(&obj, 1e-9);
        assert_eq!(s.r(), 3);
        assert_eq!(s.levels()[0].multiplicity, 2);
    }

    #[test]
    fn table_validation() {
        assert!(ObjectiveTable::new(2, 2, vec![0.0; 3]).is_err());
        assert!(ObjectiveTable::new(1, 2, vec![0.0, f64::NAN]).is_err());
        assert!(ObjectiveTable::new(1, 1, vec![0.0]).is_err());
        assert!(ObjectiveTable::new(0, 2, vec![0.0]).is_err());
    }

    #[test]
    fn digit_encoding_is_little_endian() {
        let obj = ObjectiveTable::new(2, 3, vec![0.0; 9]).unwrap();
        assert_eq!(obj.digits(5), vec![2, 1]);
        assert_eq!(obj.index_of(&[2, 1]), 5);
    }

    #[test]
    fn uniform_states() {
        let s = uniform_state(1, 2).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
        let s = uniform_state(3, 2).unwrap();
        assert!(s.amplitudes().iter().all(|a| (a.re - 1.0 / 8f64.sqrt()).abs() < 1e-15));
        let s = uniform_state(2, 3).unwrap();
        assert_eq!(s.dim(), 9);
        assert!(s.amplitudes().iter().all(|a| (a.re - 1.0 / 3.0).abs() < 1e-15));
        assert!(matches!(uniform_state(21, 2), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn uniform_overlaps_on_p3() {
        let s = build_spectrum(&p3_cut());
        let o = decompose_initial_state(&uniform_state(3, 2).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        let expect = [(2.0f64 / 8.0).sqrt(), (4.0f64 / 8.0).sqrt(), (2.0f64 / 8.0).sqrt()];
        for (c, e) in o.c.iter().zip(expect) {
            assert!((c - e).abs() < 1e-14);
        }
        assert_eq!(o.d, 3);
    }

    #[test]
    fn basis_state_lives_in_one_level() {
        let s = build_spectrum(&p3_cut());
        let o = decompose_initial_state(&InitialState::basis(8, 0).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(o.d, 1);
        assert_eq!(o.supported_levels, vec![2]);
        assert_eq!(o.c, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn negative_components_carry_sign() {
        let obj = ObjectiveTable::new(1, 2, vec![1.0, 0.0]).unwrap();
        let s = build_spectrum(&obj);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let st = InitialState::new(vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)], 1e-12).unwrap();
        let o = decompose_initial_state(&st, &s, DEFAULT_TOL_ZERO).unwrap();
        assert!((o.c[0] - h).abs() < 1e-15 && (o.c[1] + h).abs() < 1e-15);
        assert!(o.sum_c().abs() < 1e-15);
    }

    #[test]
    fn global_phase_is_stripped() {
        let obj = ObjectiveTable::new(1, 2, vec![1.0, 0.0]).unwrap();
        let s = build_spectrum(&obj);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let st = InitialState::new(vec![Complex64::new(0.0, h), Complex64::new(0.0, h)], 1e-12).unwrap();
        let o = decompose_initial_state(&st, &s, DEFAULT_TOL_ZERO).unwrap();
        assert!((o.c[0] - h).abs() < 1e-15 && (o.c[1] - h).abs() < 1e-15);
        let back = o.reconstruct(&s);
        for (a, b) in back.iter().zip(st.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn genuinely_complex_overlap_is_rejected() {
        let obj = ObjectiveTable::new(1, 2, vec![1.0, 0.0]).unwrap();
        let s = build_spectrum(&obj);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let st = InitialState::new(vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)], 1e-12).unwrap();
        assert!(matches!(
            decompose_initial_state(&st, &s, DEFAULT_TOL_ZERO),
            Err(Error::ComplexOverlap { .. })
        ));
    }

    #[test]
    fn unnormalized_state_rejected() {
        assert!(InitialState::new(vec![Complex64::new(1.0, 0.0); 2], 1e-9).is_err());
    }

    fn small_table() -> impl Strategy<Value = ObjectiveTable> {
        (1usize..=4, 2usize..=3).prop_flat_map(|(n, q)| {
            let dim = q.pow(n as u32);
            prop::collection::vec(-3i32..=3, dim)
                .prop_map(move |v| ObjectiveTable::new(n, q, v.into_iter().map(f64::from).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn spectrum_invariants(obj in small_table()) {
            let s = build_spectrum(&obj);
            let total: usize = s.levels().iter().map(|l| l.multiplicity).sum();
            prop_assert_eq!(total, obj.dim());
            for w in s.levels().windows(2) {
                prop_assert!(w[0].value > w[1].value);
            }
            for x in 0..obj.dim() {
                prop_assert_eq!(s.levels()[s.level_of(x)].value, obj.value(x));
            }
        }

        #[test]
        fn real_states_reconstruct(obj in small_table(), raw in prop::collection::vec(-1.0f64..1.0, 81)) {
            let s = build_spectrum(&obj);
            let amps: Vec<Complex64> = raw[..obj.dim()].iter().map(|&v| Complex64::new(v, 0.0)).collect();
            prop_assume!(amps.iter().any(|a| a.norm() > 1e-3));
            let st = InitialState::normalized(amps).unwrap();
            let o = decompose_initial_state(&st, &s, DEFAULT_TOL_ZERO).unwrap();
            let back = o.reconstruct(&s);
            for (a, b) in back.iter().zip(st.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
            let sq: f64 = o.c.iter().map(|c| c * c).sum();
            prop_assert!((sq - 1.0).abs() < DEFAULT_TOL_NORM);
            prop_assert!(o.d <= s.r() && s.r() <= obj.dim());
            for &j in &o.supported_levels {
                let comp = o.component(j).unwrap();
                let nrm: f64 = comp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                prop_assert!((nrm - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn uniform_coefficients_are_positive(obj in small_table()) {
            let s = build_spectrum(&obj);
            let o = decompose_initial_state(&uniform_state(obj.n(), obj.q()).unwrap(), &s, DEFAULT_TOL_ZERO).unwrap();
            prop_assert_eq!(o.d, s.r());
            for (j, l) in s.levels().iter().enumerate() {
                let expect = (l.multiplicity as f64 / obj.dim() as f64).sqrt();
                prop_assert!((o.c[j] - expect).abs() < 1e-12);
            }
            prop_assert!(o.sum_c() > 0.0);
        }
    }
}
