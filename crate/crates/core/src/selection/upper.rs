//! Upper-barrier selection of exactly `k` vectors with small top eigenvalue.
//!
//! The barrier starts at `u₀ = 2·c̄·k` (`c̄` the mean squared norm) and moves
//! by `δ = u₀/k` per step. A candidate `v` is admissible when
//! `v*(u'I − A)⁻¹v < 1`, in which case Sherman–Morrison gives
//! `Φ^{u'}(A + vv*) = Φ^{u'}(A) + v*(u'I − A)⁻²v / (1 − v*(u'I − A)⁻¹v)`.
//! The engine picks the admissible index minimizing that value. If no index
//! is admissible the run restarts with `u₀` doubled.

use faer::Mat;
use num_complex::Complex64;

use super::{projections, rank_one_update, Argbest, Mode, SelectionResult, StepRecord, VectorSystem};
use crate::linalg::{hermitian_eig, Eigh};
use crate::{Error, Result};

/// How many times `u₀` may be doubled before giving up.
pub const UPPER_MAX_RESTARTS: usize = 16;

pub fn upper_select(sys: &VectorSystem, k: usize) -> Result<SelectionResult> {
    let (n, m) = (sys.n(), sys.m());
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if k > m {
        return Err(Error::KTooLarge { k, m });
    }
    let q = k as f64 / n as f64;
    if k == m {
        return certify(sys, (0..m).collect(), Vec::new(), q);
    }

    let mut u0 = 2.0 * sys.mean_norm_sqr() * k as f64;
    for _ in 0..=UPPER_MAX_RESTARTS {
        if let Some((indices, steps)) = attempt(sys, k, u0)? {
            return certify(sys, indices, steps, q);
        }
        u0 *= 2.0;
    }
    Err(Error::NoFeasibleCandidate { step: 0 })
}

fn attempt(sys: &VectorSystem, k: usize, u0: f64) -> Result<Option<(Vec<usize>, Vec<StepRecord>)>> {
    let (n, m) = (sys.n(), sys.m());
    let v = sys.raw();
    let delta = u0 / k as f64;
    let mut u = u0;
    let mut a = Mat::<Complex64>::zeros(n, n);
    let mut eig = Eigh::of(&a)?;
    let mut chosen = vec![false; m];
    let mut indices = Vec::with_capacity(k);
    let mut log = Vec::with_capacity(k);

    for step in 0..k {
        let u1 = u + delta;
        let phi: f64 = eig.values.iter().map(|x| 1.0 / (u1 - x)).sum();
        let proj = projections(&eig, v);
        let mut best = Argbest::default();
        for j in (0..m).filter(|&j| !chosen[j]) {
            let (mut r1, mut r2) = (0.0, 0.0);
            for (e, &x) in eig.values.iter().enumerate() {
                let g = 1.0 / (u1 - x);
                r1 += proj[(e, j)] * g;
                r2 += proj[(e, j)] * g * g;
            }
            if r1 < 1.0 {
                best.offer_min(j, phi + r2 / (1.0 - r1));
            }
        }
        let Some(j) = best.index() else {
            return Ok(None);
        };
        rank_one_update(&mut a, v, j, 1.0);
        chosen[j] = true;
        indices.push(j);
        u = u1;
        eig = Eigh::of(&a)?;
        log.push(StepRecord {
            step,
            index: j,
            weight: None,
            u: Some(u),
            l: None,
            lambda_min: eig.values[0],
            lambda_max: eig.values[n - 1],
            phi_upper: Some(eig.values.iter().map(|x| 1.0 / (u - x)).sum()),
            phi_lower: None,
            feasible: true,
        });
    }
    indices.sort_unstable();
    Ok(Some((indices, log)))
}

fn certify(sys: &VectorSystem, indices: Vec<usize>, steps: Vec<StepRecord>, q: f64) -> Result<SelectionResult> {
    let spec = hermitian_eig(&sys.frame_operator(&indices, &[]))?;
    Ok(SelectionResult {
        indices,
        weights: Vec::new(),
        lambda_min: spec.lambda_min(),
        lambda_max: spec.lambda_max(),
        q,
        steps,
        mode: Mode::Upper,
    })
}
