//! Exact bounds for periodic sets over grid spectra, the sampling/Riesz
//! duality, densities, a closed-form Gram oracle over interval unions and
//! a time-domain Monte-Carlo check.
//!
//! For `Λ = J + mℤ` and `S` a union of cells `I`, every `f ∈ PW_S` splits
//! as `f = Σ_r e^{i2πrx/m} f_r` with `f_r ∈ PW_{[0,2π/m]}`, and
//! `Σ_Λ |f(λ)|² = (1/m)∫ ‖F_I(J)(f_r(x))_r‖² dx`. The sampling bounds are
//! therefore exactly `λ_{min,max}(F_I(J)* F_I(J))/m`.

mod montecarlo;

pub use montecarlo::{montecarlo_timedomain, MonteCarloReport, TestSignal, EPS_TAIL, MIN_PERIODS, SIGNALS};

use serde::{Deserialize, Serialize};

use crate::construct::SamplingSet;
use crate::linalg::{dft_submatrix, gram, hermitian_eigenvalues, ComplexMatrix};
use crate::spectrum::{complement, GridSpectrum, IntervalSet};
use crate::{Complex64, Density, Error, Result};

/// Tolerance for the `tight` flag.
pub const TIGHT_TOL: f64 = 1e-10;
/// Tolerance for the exact duality identity `A = B`.
pub const DUALITY_TOL: f64 = 1e-9;
/// Largest frequency list accepted by [`gram_quadrature_oracle`].
pub const MAX_FREQUENCIES: usize = 2000;

/// Lower and upper bounds of a periodic set over a grid spectrum.
///
/// For sampling sets `landau_ok` means `lower > 0 ⟹ density ≥ |S|`; for
/// Riesz sets it means `lower > 0 ⟹ density ≤ |Ω|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: f64,
    pub density: Density,
    pub landau_floor: Density,
    pub landau_ok: bool,
    pub tight: bool,
}

fn check_period(g: &GridSpectrum, lam: &SamplingSet) -> Result<()> {
    if g.m() != lam.m() {
        return Err(Error::PeriodMismatch { spectrum: g.m(), set: lam.m() });
    }
    Ok(())
}

fn extremes(h: &ComplexMatrix) -> Result<(f64, f64)> {
    let values = hermitian_eigenvalues(h)?;
    Ok((values[0].max(0.0), values[values.len() - 1].max(0.0)))
}

fn report(lower: f64, upper: f64, density: Density, floor: Density, landau_ok: bool) -> BoundReport {
    BoundReport { lower, upper, density, landau_floor: floor, landau_ok, tight: (upper - lower).abs() <= TIGHT_TOL }
}

/// Frame bounds of `Λ = J + mℤ` for `PW_S`:
/// `λ_{min,max}(gram(F_I(J)))/m`. When `|J| < n` the lower bound is `0`.
pub fn sampling_bounds(g: &GridSpectrum, lam: &SamplingSet) -> Result<BoundReport> {
    check_period(g, lam)?;
    let m = g.m() as f64;
    let f = dft_submatrix(g.m(), lam.residues(), g.cells())?;
    let (lo, hi) = extremes(&gram(&f))?;
    let lower = if lam.len() < g.n() { 0.0 } else { lo / m };
    let density = lam.density();
    let floor = g.measure();
    Ok(report(lower, hi / m, density, floor, lower == 0.0 || density >= floor))
}

/// Riesz bounds of `{e^{iγt}}_{γ∈J+mℤ}` in `L²(Ω)`, `Ω` a cell union:
/// extremes of the `|J| × |J|` Gram of `(1/√m)·F[I_Ω, J]`. When
/// `|J| > |I_Ω|` the lower bound is `0`.
pub fn riesz_bounds(omega: &GridSpectrum, gamma: &SamplingSet) -> Result<BoundReport> {
    check_period(omega, gamma)?;
    let m = omega.m() as f64;
    let f = dft_submatrix(omega.m(), omega.cells(), gamma.residues())?;
    let (lo, hi) = extremes(&gram(&f))?;
    let lower = if gamma.len() > omega.n() { 0.0 } else { lo / m };
    let density = gamma.density();
    let ceiling = omega.measure();
    Ok(report(lower, hi / m, density, ceiling, lower == 0.0 || density <= ceiling))
}

/// Sampling lower bound `B` of `(S, Λ)` against the Riesz lower bound `A`
/// of the complementary exponentials `{e^{iγt}}_{γ∈ℤ∖Λ}` in `L²(T∖S)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    #[serde(rename = "B")]
    pub b: f64,
    /// `None` stands for `+∞` (empty complementary system).
    #[serde(rename = "A")]
    pub a: Option<f64>,
    /// `A/2 ≤ B ≤ 2A`.
    pub factor_two_pass: bool,
    /// `|A − B| ≤ 1e−9`.
    pub exact_identity_pass: bool,
    /// Set when `Λ = ℤ`; both checks then pass trivially.
    pub vacuous: bool,
}

pub fn duality_check(g: &GridSpectrum, lam: &SamplingSet) -> Result<DualityReport> {
    let b = sampling_bounds(g, lam)?.lower;
    let rest: Vec<usize> = (0..g.m()).filter(|r| !lam.contains_residue(*r)).collect();
    if rest.is_empty() {
        return Ok(DualityReport { b, a: None, factor_two_pass: true, exact_identity_pass: true, vacuous: true });
    }
    let gamma = SamplingSet::new(g.m(), rest, crate::construct::SetKind::Riesz)?;
    let a = match complement(g) {
        Ok(omega) => riesz_bounds(&omega, &gamma)?.lower,
        // no room left: every combination vanishes on the empty set
        Err(Error::EmptyComplement) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(DualityReport {
        b,
        a: Some(a),
        factor_two_pass: a / 2.0 <= b && b <= 2.0 * a,
        exact_identity_pass: (a - b).abs() <= DUALITY_TOL,
        vacuous: false,
    })
}

/// Lower, upper and symmetric densities of a periodic set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Densities {
    pub d_minus: Density,
    pub d_plus: Density,
    pub d_sharp: Density,
}

/// For `J + mℤ` all three equal `|J|/m`.
pub fn densities(lam: &SamplingSet) -> Densities {
    let d = lam.density();
    Densities { d_minus: d, d_plus: d, d_sharp: d }
}

/// `G_{γγ'} = (1/2π)∫_Ω e^{i(γ−γ')t} dt`, in closed form per interval.
pub fn gram_quadrature_oracle(omega: &IntervalSet, frequencies: &[i64]) -> Result<ComplexMatrix> {
    if frequencies.len() > MAX_FREQUENCIES {
        return Err(Error::InvalidParameter(format!(
            "{} frequencies exceed the limit {MAX_FREQUENCIES}",
            frequencies.len()
        )));
    }
    let mut sorted = frequencies.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(format!("duplicate frequency {}", w[0])));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let entry = |k: i64| -> Complex64 {
        omega
            .intervals()
            .iter()
            .map(|&(lo, hi)| {
                if k == 0 {
                    Complex64::new((hi - lo) / two_pi, 0.0)
                } else {
                    let kf = k as f64;
                    (Complex64::from_polar(1.0, kf * hi) - Complex64::from_polar(1.0, kf * lo))
                        / Complex64::new(0.0, two_pi * kf)
                }
            })
            .sum()
    };
    let p = frequencies.len();
    let mut g = ComplexMatrix::zeros(p, p);
    for a in 0..p {
        for b in a..p {
            let z = entry(frequencies[a] - frequencies[b]);
            g.set(a, b, z);
            g.set(b, a, z.conj());
        }
    }
    Ok(g)
}

/// The `size` elements of `J + mℤ` closest to `0`, ordered by `(|γ|, γ)`.
/// Sections of increasing size are nested.
pub fn periodic_section(lam: &SamplingSet, size: usize) -> Vec<i64> {
    let m = lam.m() as i64;
    let periods = (size / lam.len().max(1)) as i64 / 2 + 2;
    let mut all: Vec<i64> =
        (-periods..=periods).flat_map(|k| lam.residues().iter().map(move |&j| j as i64 + k * m)).collect();
    all.sort_by_key(|&g| (g.abs(), g));
    all.truncate(size);
    all
}

/// `λ_min` of the finite section of size `size` of the exponential system
/// `J + mℤ` over `omega`.
pub fn section_lambda_min(omega: &IntervalSet, lam: &SamplingSet, size: usize) -> Result<f64> {
    let g = gram_quadrature_oracle(omega, &periodic_section(lam, size))?;
    Ok(hermitian_eigenvalues(&g)?[0])
}
