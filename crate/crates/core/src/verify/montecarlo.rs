//! Time-domain sampling check on concrete band-limited signals.
//!
//! A test signal carries a Hann window on every cell of its spectrum:
//! `f̂(ω) = c_r · sin²(π(ω − a_r)/h)` on `[a_r, a_r + h]`, `a_r = 2πr/m`,
//! `h = 2π/m`. Its inverse transform is
//! `f(x) = (h/2π) · H(hx) · Σ_r c_r e^{i a_r x}` with
//! `H(ω) = ∫₀¹ sin²(πτ) e^{iωτ} dτ = 2π² i (e^{iω} − 1) / (ω(ω² − 4π²))`,
//! and `‖f‖² = (1/2π)∫|f̂|² = (3/8)(h/2π) Σ|c_r|²`. Since `|H(ω)| = O(|ω|⁻³)`
//! the sample sums converge fast when truncated to `|x| ≤ Km`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::SamplingSet;
use crate::spectrum::GridSpectrum;
use crate::{Complex64, Error, Result};

/// Relative slack allowed around the certified bounds.
pub const EPS_TAIL: f64 = 0.05;
/// Smallest accepted truncation, in periods.
pub const MIN_PERIODS: usize = 10;
/// Number of signals drawn per run.
pub const SIGNALS: usize = 20;

/// Hann-windowed signal with one complex amplitude per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct TestSignal {
    m: usize,
    cells: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

/// `∫₀¹ sin²(πτ) e^{iωτ} dτ` for `ω = 2πx/m` with integer `x`.
fn window_transform(x: i64, m: usize) -> Complex64 {
    let mi = m as i64;
    if x == 0 {
        return Complex64::new(0.5, 0.0);
    }
    if x == mi || x == -mi {
        return Complex64::new(-0.25, 0.0);
    }
    let w = 2.0 * PI * x as f64 / m as f64;
    let e = Complex64::from_polar(1.0, w) - 1.0;
    Complex64::new(0.0, 2.0 * PI * PI) * e / (w * (w * w - 4.0 * PI * PI))
}

impl TestSignal {
    pub fn new(g: &GridSpectrum, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != g.n() {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {} cells", amplitudes.len(), g.n())));
        }
        Ok(TestSignal { m: g.m(), cells: g.cells().to_vec(), amplitudes })
    }

    /// Amplitudes uniform in `[−1, 1]²`.
    pub fn random(g: &GridSpectrum, rng: &mut impl Rng) -> Self {
        let amplitudes =
            (0..g.n()).map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))).collect();
        TestSignal { m: g.m(), cells: g.cells().to_vec(), amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `f̂(ω)`.
    pub fn spectrum_at(&self, omega: f64) -> Complex64 {
        let h = 2.0 * PI / self.m as f64;
        let t = omega.rem_euclid(2.0 * PI) / h;
        let r = (t.floor() as usize).min(self.m - 1);
        match self.cells.binary_search(&r) {
            Ok(pos) => self.amplitudes[pos] * (PI * (t - r as f64)).sin().powi(2),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `f(x)` at an integer point.
    pub fn eval(&self, x: i64) -> Complex64 {
        let m = self.m as i64;
        let phase: Complex64 = self
            .cells
            .iter()
            .zip(&self.amplitudes)
            .map(|(&r, &c)| c * Complex64::from_polar(1.0, 2.0 * PI * ((r as i64 * x).rem_euclid(m)) as f64 / m as f64))
            .sum();
        phase * window_transform(x, self.m) / self.m as f64
    }

    /// `‖f‖²` from the window's `∫ sin⁴ = 3/8`.
    pub fn norm_sqr(&self) -> f64 {
        0.375 / self.m as f64 * self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// `Σ_{λ∈Λ, |λ|≤Km} |f(λ)|² / ‖f‖²`.
    pub fn sampling_ratio(&self, lam: &SamplingSet, periods: usize) -> f64 {
        let m = self.m as i64;
        let limit = periods as i64 * m;
        let mut sum = 0.0;
        for &j in lam.residues() {
            let j = j as i64;
            let mut x = j - (j + limit).div_euclid(m) * m;
            while x <= limit {
                sum += self.eval(x).norm_sqr();
                x += m;
            }
        }
        sum / self.norm_sqr()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub signals: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

/// Draws [`SIGNALS`] signals (signal `i` uses stream `i` of a ChaCha8
/// generator seeded with `seed`) and compares the truncated sample sums
/// with the exact bounds of `(g, lam)` widened by [`EPS_TAIL`].
pub fn montecarlo_timedomain(
    g: &GridSpectrum,
    lam: &SamplingSet,
    seed: u64,
    periods: usize,
) -> Result<MonteCarloReport> {
    if periods < MIN_PERIODS {
        return Err(Error::InvalidParameter(format!("K = {periods} below {MIN_PERIODS}")));
    }
    let bounds = super::sampling_bounds(g, lam)?;
    let ratios: Vec<f64> = (0..SIGNALS as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            TestSignal::random(g, &mut rng).sampling_ratio(lam, periods)
        })
        .collect();
    let ratio_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio_max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(MonteCarloReport {
        k: periods,
        signals: SIGNALS,
        ratio_min,
        ratio_max,
        lower: bounds.lower,
        upper: bounds.upper,
        pass: ratio_min >= bounds.lower * (1.0 - EPS_TAIL) && ratio_max <= bounds.upper * (1.0 + EPS_TAIL),
    })
}
