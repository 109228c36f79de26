//! Dense complex matrices: DFT submatrices, Gram products, a Hermitian
//! eigensolver (backed by `faer`) and resolvent quadratic forms.

use std::f64::consts::TAU;

use faer::{Mat, Side as FaerSide};
use num_complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.data[i * n + i] = ONE;
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Builds from row-major entries; every entry must be finite.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut out = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            out.data[i * n + i] = Complex64::new(d, 0.0);
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scaled(&self, s: f64) -> Self {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(from_faer(&(self.to_faer() * rhs.to_faer())))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `max |h_ij − conj(h_ji)|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub(crate) fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }
}

pub(crate) fn from_faer(m: &Mat<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn check_residues(m: usize, set: &[usize]) -> Result<()> {
    let mut seen = vec![false; m];
    for &r in set {
        if r >= m {
            return Err(Error::ResidueOutOfRange { residue: r, m });
        }
        if seen[r] {
            return Err(Error::DuplicateResidue(r));
        }
        seen[r] = true;
    }
    Ok(())
}

/// `e^{i2πjr/m}` with the exponent reduced mod `m` first.
pub fn root_of_unity(m: usize, j: usize, r: usize) -> Complex64 {
    let k = ((j as u128 * r as u128) % m as u128) as f64;
    Complex64::from_polar(1.0, TAU * k / m as f64)
}

/// Submatrix of the `m`-point Fourier matrix: entry `(a, b)` is
/// `exp(i·2π·row_set[a]·col_set[b]/m)`.
pub fn dft_submatrix(m: usize, row_set: &[usize], col_set: &[usize]) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("DFT order must be positive".into()));
    }
    check_residues(m, row_set)?;
    check_residues(m, col_set)?;
    Ok(ComplexMatrix::from_fn(row_set.len(), col_set.len(), |a, b| root_of_unity(m, row_set[a], col_set[b])))
}

/// `a* a`, Hermitianized exactly.
pub fn gram(a: &ComplexMatrix) -> ComplexMatrix {
    let fa = a.to_faer();
    let g = fa.adjoint() * &fa;
    let n = a.cols;
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(g[(i, i)].re, 0.0)
        } else if i < j {
            (g[(i, j)] + g[(j, i)].conj()) * 0.5
        } else {
            (g[(j, i)] + g[(i, j)].conj()).conj() * 0.5
        }
    })
}

/// Eigenvalues (ascending) and, optionally, unit eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<ComplexMatrix>,
}

impl HermitianSpectrum {
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `max_k ‖H v_k − λ_k v_k‖`.
    pub fn max_residual(&self, h: &ComplexMatrix) -> Option<f64> {
        let vecs = self.eigenvectors.as_ref()?;
        let mut worst = 0.0f64;
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let v = vecs.column(k);
            let hv = h.mul_vec(&v);
            let r = hv.iter().zip(&v).map(|(a, b)| (a - b * lam).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        Some(worst)
    }
}

/// Relative asymmetry tolerated before [`Error::NotHermitian`].
pub const HERMITIAN_TOL: f64 = 1e-12;

fn symmetrized_faer(h: &ComplexMatrix) -> Result<Mat<Complex64>> {
    if h.rows != h.cols {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", h.rows, h.cols)));
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    Ok(Mat::from_fn(h.rows, h.cols, |i, j| {
        if i == j {
            Complex64::new(h.get(i, i).re, 0.0)
        } else {
            (h.get(i, j) + h.get(j, i).conj()) * 0.5
        }
    }))
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues ascend. Each eigenvector is rotated so that its first
/// entry of maximal modulus is real and positive, which makes the output
/// reproducible for identical input.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let a = symmetrized_faer(h)?;
    let eig = Eigh::of(&a)?;
    Ok(HermitianSpectrum { eigenvalues: eig.values, eigenvectors: Some(from_faer(&eig.vectors)) })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let a = symmetrized_faer(h)?;
    eigenvalues_faer(&a)
}

pub(crate) fn eigenvalues_faer(a: &Mat<Complex64>) -> Result<Vec<f64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut vals: Vec<f64> = a.self_adjoint_eigenvalues(FaerSide::Lower).map_err(|_| Error::EigenFailed)?;
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Eigendecomposition in `faer` form, used inside the selection loops.
pub(crate) struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Mat<Complex64>,
}

impl Eigh {
    /// `a` must be Hermitian; only its lower triangle is read.
    pub fn of(a: &Mat<Complex64>) -> Result<Eigh> {
        let n = a.nrows();
        if n == 0 {
            return Ok(Eigh { values: Vec::new(), vectors: Mat::zeros(0, 0) });
        }
        let evd = a.self_adjoint_eigen(FaerSide::Lower).map_err(|_| Error::EigenFailed)?;
        let s = evd.S();
        let u = evd.U();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| s[x].re.total_cmp(&s[y].re).then(x.cmp(&y)));
        let values = order.iter().map(|&k| s[k].re).collect();
        let mut vectors = Mat::<Complex64>::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            let peak = (0..n).map(|i| u[(i, src)].norm()).fold(0.0, f64::max);
            let pivot = (0..n).find(|&i| u[(i, src)].norm() >= peak * (1.0 - 1e-8)).unwrap_or(0);
            let z = u[(pivot, src)];
            let phase = if z.norm() > 0.0 { z.conj() / z.norm() } else { ONE };
            for i in 0..n {
                vectors[(i, dst)] = u[(i, src)] * phase;
            }
        }
        Ok(Eigh { values, vectors })
    }
}

/// Which side of the spectrum a resolvent shift sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `shift > λ_max`: forms of `(shift·I − A)⁻¹`.
    Above,
    /// `shift < λ_min`: forms of `(A − shift·I)⁻¹`.
    Below,
}

/// `(v*(R)v, v*(R²)v)` with `R = (shift·I − a)⁻¹` above the spectrum or
/// `R = (a − shift·I)⁻¹` below it, evaluated in the eigenbasis of `a`.
pub fn resolvent_quadratics(a: &ComplexMatrix, shift: f64, side: Side, v: &[Complex64]) -> Result<(f64, f64)> {
    if v.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a {}x{} matrix",
            v.len(),
            a.rows(),
            a.cols()
        )));
    }
    let spec = hermitian_eig(a)?;
    let norm = spec.lambda_max().abs().max(spec.lambda_min().abs());
    let margin = match side {
        Side::Above => shift - spec.lambda_max(),
        Side::Below => spec.lambda_min() - shift,
    };
    if !(margin > 0.0) || margin < 1e-12 * norm {
        return Err(Error::ShiftInsideSpectrum { margin });
    }
    let vecs = spec.eigenvectors.as_ref().expect("eigenvectors requested");
    let (mut q1, mut q2) = (0.0, 0.0);
    for (k, &lam) in spec.eigenvalues.iter().enumerate() {
        let p: f64 = (0..a.rows()).map(|i| vecs.get(i, k).conj() * v[i]).sum::<Complex64>().norm_sqr();
        let gap = match side {
            Side::Above => shift - lam,
            Side::Below => lam - shift,
        };
        q1 += p / gap;
        q2 += p / (gap * gap);
    }
    Ok((q1, q2))
}
