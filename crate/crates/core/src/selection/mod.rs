//! Barrier-potential selection engines over finite vector systems.
//!
//! * [`bss_select`] / [`bss_unweighted`]: two-sided weighted selection
//!   with moving upper and lower barriers, and its unweighted corollary
//!   for equal-norm Parseval systems.
//! * [`rit_select`]: lower-barrier restricted-invertibility selection.
//! * [`upper_select`]: upper-barrier selection of a fixed number of
//!   vectors with small top eigenvalue.
//! * [`brute_force_best`]: exhaustive oracle for small instances.
//!
//! Every engine recomputes its barrier quantities from a fresh
//! eigendecomposition at each step and certifies its output from scratch
//! before returning.

mod brute;
mod bss;
mod rit;
mod upper;

pub use brute::{binomial, brute_force_best, Objective, MAX_SUBSETS};
pub use bss::{barrier_ratio, bss_select, bss_unweighted, sampling_constant, BarrierSchedule};
pub use rit::{rit_constant, rit_select};
pub use upper::{upper_select, UPPER_MAX_RESTARTS};

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, root_of_unity, ComplexMatrix, Eigh};
use crate::{Error, Result};

/// Tolerance for the Parseval and equal-norm flags.
pub const SYSTEM_TOL: f64 = 1e-10;

/// `m` vectors in `ℂⁿ`, stored as the columns of an `n × m` matrix.
#[derive(Clone, Debug)]
pub struct VectorSystem {
    vectors: Mat<Complex64>,
    parseval: bool,
    equal_norm: bool,
}

impl VectorSystem {
    /// Vectors are the columns of `a`.
    pub fn from_columns(a: &ComplexMatrix) -> Result<Self> {
        if a.cols() == 0 || a.rows() == 0 {
            return Err(Error::DimensionMismatch("empty vector system".into()));
        }
        Ok(Self::from_faer(a.to_faer()))
    }

    /// Vector `i` is the conjugate transpose of row `i`, so that
    /// `Σ_{i∈J} v_i v_i* = a(J)* a(J)`.
    pub fn from_rows(a: &ComplexMatrix) -> Result<Self> {
        Self::from_columns(&a.adjoint())
    }

    /// Sampling system of a grid spectrum: `v_j = conj(row j)` of
    /// `(1/√m)·F_I`, `j = 0..m`. Parseval and equal-norm with `‖v_j‖² = n/m`.
    pub fn fourier_rows(m: usize, cells: &[usize]) -> Result<Self> {
        let s = 1.0 / (m as f64).sqrt();
        let mat = Mat::from_fn(cells.len(), m, |a, j| root_of_unity(m, j, cells[a]).conj() * s);
        Ok(Self::from_faer(mat))
    }

    /// Riesz system of a grid spectrum: column `j` of `(1/√m)·F[I, 0..m]`.
    pub fn fourier_columns(m: usize, cells: &[usize]) -> Result<Self> {
        let s = 1.0 / (m as f64).sqrt();
        let mat = Mat::from_fn(cells.len(), m, |a, j| root_of_unity(m, cells[a], j) * s);
        Ok(Self::from_faer(mat))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_faer(Mat::from_fn(
            n,
            n,
            |i, j| {
                if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
        ))
    }

    fn from_faer(vectors: Mat<Complex64>) -> Self {
        let (n, m) = (vectors.nrows(), vectors.ncols());
        let frame = &vectors * vectors.adjoint();
        let mut deviation = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((frame[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        let norms: Vec<f64> = (0..m).map(|j| (0..n).map(|i| vectors[(i, j)].norm_sqr()).sum()).collect();
        let mean = norms.iter().sum::<f64>() / m as f64;
        let spread = norms.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
        VectorSystem { vectors, parseval: deviation <= SYSTEM_TOL, equal_norm: spread <= SYSTEM_TOL * mean.max(1.0) }
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.vectors.nrows()
    }

    /// Number of vectors.
    pub fn m(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn parseval(&self) -> bool {
        self.parseval
    }

    pub fn equal_norm(&self) -> bool {
        self.equal_norm
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        (0..self.n()).map(|r| self.vectors[(r, i)]).collect()
    }

    pub fn norm_sqr(&self, i: usize) -> f64 {
        (0..self.n()).map(|r| self.vectors[(r, i)].norm_sqr()).sum()
    }

    pub fn mean_norm_sqr(&self) -> f64 {
        (0..self.m()).map(|i| self.norm_sqr(i)).sum::<f64>() / self.m() as f64
    }

    pub(crate) fn raw(&self) -> &Mat<Complex64> {
        &self.vectors
    }

    /// `Σ_{i∈J} s_i v_i v_i*` as an `n × n` matrix (unit weights when
    /// `weights` is empty).
    pub fn frame_operator(&self, indices: &[usize], weights: &[f64]) -> ComplexMatrix {
        let n = self.n();
        let mut out = ComplexMatrix::zeros(n, n);
        for (pos, &i) in indices.iter().enumerate() {
            let s = weights.get(pos).copied().unwrap_or(1.0);
            for a in 0..n {
                let va = self.vectors[(a, i)] * s;
                for b in 0..n {
                    let z = out.get(a, b) + va * self.vectors[(b, i)].conj();
                    out.set(a, b, z);
                }
            }
        }
        out
    }

    /// Coefficient Gram `[⟨v_j, v_i⟩]_{i,j∈J}`, of size `|J| × |J|`.
    pub fn coefficient_gram(&self, indices: &[usize]) -> ComplexMatrix {
        let cols = ComplexMatrix::from_fn(self.n(), indices.len(), |a, b| self.vectors[(a, indices[b])]);
        linalg::gram(&cols)
    }
}

/// Which engine produced a [`SelectionResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    TwoSided,
    Unweighted,
    RestrictedInvertibility,
    Upper,
}

/// One greedy step: the barriers after the step, the chosen index and the
/// resulting eigenvalue extremes and potentials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub index: usize,
    pub weight: Option<f64>,
    pub u: Option<f64>,
    pub l: Option<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub phi_upper: Option<f64>,
    pub phi_lower: Option<f64>,
    /// Whether the chosen index met the engine's sufficient step condition.
    pub feasible: bool,
}

/// Output of a selection engine.
///
/// `q` is the size parameter: the oversampling factor for the two-sided
/// engines, `1 − d` for restricted invertibility and `k/n` for the upper
/// engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub q: f64,
    pub steps: Vec<StepRecord>,
    pub mode: Mode,
}

impl SelectionResult {
    pub fn ratio(&self) -> f64 {
        self.lambda_max / self.lambda_min
    }
}

/// `|E* v_j|²` for every eigenvector `E_k` (rows) and vector `v_j` (columns).
pub(crate) fn projections(eig: &Eigh, vectors: &Mat<Complex64>) -> Mat<f64> {
    let p = eig.vectors.adjoint() * vectors;
    Mat::from_fn(p.nrows(), p.ncols(), |k, j| p[(k, j)].norm_sqr())
}

/// Keeps the first index whose score beats the incumbent by more than a
/// relative `1e-12`, so near-ties resolve to the smallest index.
#[derive(Default)]
pub(crate) struct Argbest {
    best: Option<(usize, f64)>,
}

impl Argbest {
    pub fn offer_max(&mut self, index: usize, score: f64) {
        match self.best {
            Some((_, b)) if score <= b + 1e-12 * b.abs().max(1.0) => {}
            _ => self.best = Some((index, score)),
        }
    }

    pub fn offer_min(&mut self, index: usize, score: f64) {
        self.offer_max(index, -score);
    }

    pub fn index(&self) -> Option<usize> {
        self.best.map(|(i, _)| i)
    }
}

pub(crate) fn rank_one_update(a: &mut Mat<Complex64>, vectors: &Mat<Complex64>, j: usize, t: f64) {
    let n = a.nrows();
    for col in 0..n {
        let vc = vectors[(col, j)].conj() * t;
        for row in 0..n {
            a[(row, col)] += vectors[(row, j)] * vc;
        }
    }
}

/// Ceiling that ignores floating noise just above an integer.
pub(crate) fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}
