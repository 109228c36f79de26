//! Restricted invertibility: unweighted lower-barrier selection.
//!
//! The system is normalized to unit vectors `w_i = v_i/‖v_i‖` (the columns
//! `T e_i` of an operator with `‖T e_i‖ = 1`). The engine builds
//! `A_k = Σ_{i∈σ_k} w_i w_i*` of rank `k` while keeping every nonzero
//! eigenvalue above a barrier `b_k` that descends linearly from
//! `β = 1 − √(1−d)` to `β²` over `K = ⌈(1−d)·m/‖T‖²⌉` steps.
//!
//! With the full-space potential `Φ_b(A) = tr (A − bI)⁻¹` (the kernel of
//! `A` contributes `−1/b` per dimension), adding `w` and moving the barrier
//! to `b' < b` keeps `Φ_{b'}(A + ww*) ≤ Φ_b(A)` and raises the rank with all
//! nonzero eigenvalues above `b'` whenever
//! `−w*(A − b'I)⁻¹w − w*(A − b'I)⁻²w / (Φ_b(A) − Φ_{b'}(A)) ≥ 1`.
//! Each step picks, among indices whose addition lifts a new eigenvalue
//! above `b'` (equivalently `w*(A − b'I)⁻¹w < −1`), the one maximizing that
//! left-hand side. The sufficient condition itself can fail for very small
//! `n`, so it is only logged; the final certificate decides.

use faer::Mat;
use num_complex::Complex64;

use super::{ceil_tol, projections, rank_one_update, Argbest, Mode, SelectionResult, StepRecord, VectorSystem};
use crate::linalg::{eigenvalues_faer, hermitian_eig, Eigh};
use crate::{Error, Result};

/// `(1 − √(1−d))²`.
pub fn rit_constant(d: f64) -> f64 {
    (1.0 - (1.0 - d).sqrt()).powi(2)
}

fn potential(values: &[f64], b: f64) -> f64 {
    values.iter().map(|x| 1.0 / (x - b)).sum()
}

/// Selects `J` with `|J| ≥ ⌈(1−d)·m/‖T‖²⌉` and certifies that the
/// coefficient Gram of `{v_i}_{i∈J}` has smallest eigenvalue at least
/// `(1 − √(1−d))²·‖v‖²`. For Fourier columns of a grid spectrum this is
/// `|J| ≥ ⌈(1−d)n⌉` with bound `(1 − √(1−d))²·n/m`.
pub fn rit_select(sys: &VectorSystem, d: f64) -> Result<SelectionResult> {
    if !(d.is_finite() && d > 0.0 && d < 1.0) {
        return Err(Error::InvalidParameter(format!("d = {d} must lie in (0, 1)")));
    }
    if !sys.equal_norm() {
        let mean = sys.mean_norm_sqr();
        let spread = (0..sys.m()).map(|i| (sys.norm_sqr(i) - mean).abs()).fold(0.0, f64::max);
        return Err(Error::NotEqualNorm { spread });
    }
    let (n, m) = (sys.n(), sys.m());
    let c = sys.mean_norm_sqr();
    if !(c > 0.0) {
        return Err(Error::InvalidParameter("zero vectors".into()));
    }
    let target = rit_constant(d) * c;

    if n == m {
        let indices: Vec<usize> = (0..m).collect();
        return certify(sys, indices, Vec::new(), d, target);
    }

    let scale = 1.0 / c.sqrt();
    let w = Mat::from_fn(n, m, |i, j| sys.raw()[(i, j)] * scale);
    let frame = &w * w.adjoint();
    let op_norm_sq = *eigenvalues_faer(&frame)?.last().unwrap_or(&0.0);
    let size = ceil_tol((1.0 - d) * m as f64 / op_norm_sq).clamp(1, n.min(m));

    let beta = 1.0 - (1.0 - d).sqrt();
    let delta = (beta - beta * beta) / size as f64;
    let mut b = beta;
    let mut a = Mat::<Complex64>::zeros(n, n);
    let mut eig = Eigh::of(&a)?;
    let mut chosen = vec![false; m];
    let mut indices = Vec::with_capacity(size);
    let mut log = Vec::with_capacity(size);

    for step in 0..size {
        let b1 = b - delta;
        let gap = potential(&eig.values, b) - potential(&eig.values, b1);
        let proj = projections(&eig, &w);
        let mut best = Argbest::default();
        let mut fallback = Argbest::default();
        let mut score = vec![f64::NEG_INFINITY; m];
        for j in (0..m).filter(|&j| !chosen[j]) {
            let (mut r1, mut r2) = (0.0, 0.0);
            for (k, &x) in eig.values.iter().enumerate() {
                let g = 1.0 / (x - b1);
                r1 += proj[(k, j)] * g;
                r2 += proj[(k, j)] * g * g;
            }
            score[j] = -r1 - r2 / gap;
            // 1 + w*(A − b'I)⁻¹w < 0 iff A + ww* has one more eigenvalue above b'
            if r1 < -1.0 {
                best.offer_max(j, score[j]);
            }
            fallback.offer_max(j, score[j]);
        }
        let j = best.index().or(fallback.index()).ok_or(Error::NoFeasibleCandidate { step })?;
        rank_one_update(&mut a, &w, j, 1.0);
        chosen[j] = true;
        indices.push(j);
        b = b1;

        eig = Eigh::of(&a)?;
        // the rank is step + 1; its nonzero eigenvalues are the top ones
        let nonzero = &eig.values[n - (step + 1)..];
        log.push(StepRecord {
            step,
            index: j,
            weight: None,
            u: None,
            l: Some(b),
            lambda_min: nonzero[0],
            lambda_max: nonzero[nonzero.len() - 1],
            phi_upper: None,
            phi_lower: Some(potential(&eig.values, b)),
            feasible: score[j] >= 1.0,
        });
    }

    indices.sort_unstable();
    certify(sys, indices, log, d, target)
}

fn certify(
    sys: &VectorSystem,
    indices: Vec<usize>,
    steps: Vec<StepRecord>,
    d: f64,
    target: f64,
) -> Result<SelectionResult> {
    let spec = hermitian_eig(&sys.coefficient_gram(&indices))?;
    let value = spec.lambda_min();
    if !(value >= target) {
        return Err(Error::CertificateFailed { what: "Riesz lambda_min", value, target });
    }
    Ok(SelectionResult {
        indices,
        weights: Vec::new(),
        lambda_min: value,
        lambda_max: spec.lambda_max(),
        q: 1.0 - d,
        steps,
        mode: Mode::RestrictedInvertibility,
    })
}
