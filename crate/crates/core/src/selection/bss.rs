//! Two-sided barrier selection with weights.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;

use super::{ceil_tol, projections, rank_one_update, Argbest, Mode, SelectionResult, StepRecord, VectorSystem};
use crate::linalg::{hermitian_eig, Eigh};
use crate::{Error, Result};

/// `((√q+1)/(√q−1))²`, the eigenvalue ratio guaranteed at oversampling `q`.
pub fn barrier_ratio(q: f64) -> f64 {
    let s = q.sqrt();
    ((s + 1.0) / (s - 1.0)).powi(2)
}

/// `C(d) = ((√(1+d)−1)/(√(1+d)+1))²`, the unweighted lower-bound constant.
pub fn sampling_constant(d: f64) -> f64 {
    1.0 / barrier_ratio(1.0 + d)
}

/// Barrier constants for oversampling `q` in dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarrierSchedule {
    pub delta_l: f64,
    pub eps_l: f64,
    pub l0: f64,
    pub delta_u: f64,
    pub eps_u: f64,
    pub u0: f64,
}

impl BarrierSchedule {
    pub fn new(n: usize, q: f64) -> Self {
        let s = q.sqrt();
        let n = n as f64;
        let eps_u = (s - 1.0) / (s * (s + 1.0));
        BarrierSchedule {
            delta_l: 1.0,
            eps_l: 1.0 / s,
            l0: -n * s,
            delta_u: (s + 1.0) / (s - 1.0),
            eps_u,
            u0: n / eps_u,
        }
    }

    /// `1/δ_U + ε_U ≤ 1/δ_L − ε_L`, which makes every step feasible.
    pub fn is_feasible(&self) -> bool {
        1.0 / self.delta_u + self.eps_u <= 1.0 / self.delta_l - self.eps_l + 1e-12
    }
}

fn upper_potential(values: &[f64], u: f64) -> f64 {
    values.iter().map(|l| 1.0 / (u - l)).sum()
}

fn lower_potential(values: &[f64], l: f64) -> f64 {
    values.iter().map(|x| 1.0 / (x - l)).sum()
}

/// Weighted two-sided selection on a Parseval system.
///
/// Runs `T = ⌈q·n⌉` steps; each adds `t·v_i v_i*` for an index with
/// `U(v_i) ≤ 1/t ≤ L(v_i)` (taking `t = 2/(U+L)` for the index maximizing
/// `L − U`). Weights are finally rescaled so that the smallest eigenvalue
/// of `Σ s_i v_i v_i*` is one. When `T ≥ m` or `n = m` every index is
/// returned with unit weight.
pub fn bss_select(sys: &VectorSystem, q: f64) -> Result<SelectionResult> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::InvalidParameter(format!("oversampling q = {q} must exceed 1")));
    }
    if !sys.parseval() {
        let frame = sys.frame_operator(&(0..sys.m()).collect::<Vec<_>>(), &[]);
        let dev = (0..sys.n())
            .flat_map(|i| (0..sys.n()).map(move |j| (i, j)))
            .map(|(i, j)| {
                let t = if i == j { 1.0 } else { 0.0 };
                (frame.get(i, j) - Complex64::new(t, 0.0)).norm()
            })
            .fold(0.0, f64::max);
        return Err(Error::NotParseval { deviation: dev });
    }
    let (n, m) = (sys.n(), sys.m());
    let steps_total = ceil_tol(q * n as f64);
    if n == m || steps_total >= m {
        let indices: Vec<usize> = (0..m).collect();
        let weights = vec![1.0; m];
        return finish(sys, indices, weights, q, Vec::new(), Mode::TwoSided);
    }

    let sched = BarrierSchedule::new(n, q);
    debug_assert!(sched.is_feasible());
    let vectors = sys.raw();
    let mut a = Mat::<Complex64>::zeros(n, n);
    let mut eig = Eigh::of(&a)?;
    let (mut u, mut l) = (sched.u0, sched.l0);
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    let mut log = Vec::with_capacity(steps_total);

    for step in 0..steps_total {
        let (u1, l1) = (u + sched.delta_u, l + sched.delta_l);
        let lam = &eig.values;
        let du = upper_potential(lam, u) - upper_potential(lam, u1);
        let dl = lower_potential(lam, l1) - lower_potential(lam, l);
        let proj = projections(&eig, vectors);

        let mut best = Argbest::default();
        let mut chosen_bounds = vec![(0.0, 0.0); m];
        for j in 0..m {
            let (mut a1, mut a2, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0);
            for (k, &x) in lam.iter().enumerate() {
                let p = proj[(k, j)];
                let gu = 1.0 / (u1 - x);
                let gl = 1.0 / (x - l1);
                a1 += p * gu;
                a2 += p * gu * gu;
                b1 += p * gl;
                b2 += p * gl * gl;
            }
            let up = a2 / du + a1;
            let lo = b2 / dl - b1;
            chosen_bounds[j] = (up, lo);
            if up <= lo {
                best.offer_max(j, lo - up);
            }
        }
        let j = best.index().ok_or(Error::NoFeasibleCandidate { step })?;
        let (up, lo) = chosen_bounds[j];
        let t = 2.0 / (up + lo);
        rank_one_update(&mut a, vectors, j, t);
        *acc.entry(j).or_insert(0.0) += t;
        u = u1;
        l = l1;

        eig = Eigh::of(&a)?;
        let lmin = eig.values[0];
        let lmax = eig.values[n - 1];
        if !(lmax < u && lmin > l) {
            return Err(Error::NoFeasibleCandidate { step });
        }
        log.push(StepRecord {
            step,
            index: j,
            weight: Some(t),
            u: Some(u),
            l: Some(l),
            lambda_min: lmin,
            lambda_max: lmax,
            phi_upper: Some(upper_potential(&eig.values, u)),
            phi_lower: Some(lower_potential(&eig.values, l)),
            feasible: true,
        });
    }

    let (indices, weights): (Vec<usize>, Vec<f64>) = acc.into_iter().unzip();
    finish(sys, indices, weights, q, log, Mode::TwoSided)
}

// Rescale so λ_min = 1 and certify the ratio from a freshly assembled sum.
fn finish(
    sys: &VectorSystem,
    indices: Vec<usize>,
    weights: Vec<f64>,
    q: f64,
    steps: Vec<StepRecord>,
    mode: Mode,
) -> Result<SelectionResult> {
    let raw = hermitian_eig(&sys.frame_operator(&indices, &weights))?;
    let base = raw.lambda_min();
    if !(base > 0.0) {
        return Err(Error::CertificateFailed { what: "weighted lambda_min", value: base, target: 0.0 });
    }
    let weights: Vec<f64> = weights.iter().map(|w| w / base).collect();
    let spec = hermitian_eig(&sys.frame_operator(&indices, &weights))?;
    let result = SelectionResult {
        indices,
        weights,
        lambda_min: spec.lambda_min(),
        lambda_max: spec.lambda_max(),
        q,
        steps,
        mode,
    };
    let bound = barrier_ratio(q) * (1.0 + 1e-9);
    if !(result.ratio() <= bound) {
        return Err(Error::CertificateFailed {
            what: "weighted eigenvalue ratio",
            value: result.ratio(),
            target: bound,
        });
    }
    Ok(result)
}

/// Unweighted selection for an equal-norm Parseval system.
///
/// Runs [`bss_select`] with `q = 1 + d`, drops the weights and certifies
/// `λ_min(Σ_{i∈J} v_i v_i*) ≥ C(d)·n/m`.
pub fn bss_unweighted(sys: &VectorSystem, d: f64) -> Result<SelectionResult> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
    }
    if !sys.equal_norm() {
        let mean = sys.mean_norm_sqr();
        let spread = (0..sys.m()).map(|i| (sys.norm_sqr(i) - mean).abs()).fold(0.0, f64::max);
        return Err(Error::NotEqualNorm { spread });
    }
    let weighted = bss_select(sys, 1.0 + d)?;
    let spec = hermitian_eig(&sys.frame_operator(&weighted.indices, &[]))?;
    let target = sampling_constant(d) * sys.n() as f64 / sys.m() as f64;
    let value = if weighted.indices.len() < sys.n() { 0.0 } else { spec.lambda_min() };
    if !(value >= target) {
        return Err(Error::CertificateFailed { what: "unweighted lambda_min", value, target });
    }
    Ok(SelectionResult {
        indices: weighted.indices,
        weights: Vec::new(),
        lambda_min: value,
        lambda_max: spec.lambda_max(),
        q: 1.0 + d,
        steps: weighted.steps,
        mode: Mode::Unweighted,
    })
}
