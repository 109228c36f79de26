//! Bounds recomputed with a plain cyclic Jacobi eigensolver on the real
//! embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the complex
//! matrix with every eigenvalue doubled.

use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwsample::construct::{SamplingSet, SetKind};
use pwsample::spectrum::GridSpectrum;
use pwsample::verify::{riesz_bounds, sampling_bounds};

fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Extreme eigenvalues of `(1/m) Σ_rows conj(x) xᵀ` over `x_c = e^{2πi·row·c/m}`.
fn gram_extremes(m: usize, rows: &[usize], cols: &[usize]) -> (f64, f64) {
    let n = cols.len();
    let mut a = vec![vec![0.0; 2 * n]; 2 * n];
    for (i, &ci) in cols.iter().enumerate() {
        for (j, &cj) in cols.iter().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for &r in rows {
                let phase = 2.0 * PI * (r * (cj + m - ci) % m) as f64 / m as f64;
                re += phase.cos();
                im += phase.sin();
            }
            re /= m as f64;
            im /= m as f64;
            a[i][j] = re;
            a[i + n][j + n] = re;
            a[i][j + n] = -im;
            a[i + n][j] = im;
        }
    }
    let ev = jacobi_eigenvalues(a);
    (ev[0], ev[2 * n - 1])
}

fn cases() -> Vec<(usize, Vec<usize>, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pick = |rng: &mut ChaCha8Rng, m: usize, size: usize| {
        let mut v = sample(rng, m, size).into_vec();
        v.sort();
        v
    };
    let mut out = Vec::new();
    for m in [5usize, 8, 12, 17, 24] {
        for _ in 0..6 {
            let n = rng.random_range(1..=m / 2);
            let j = rng.random_range(1..=m);
            let cells = pick(&mut rng, m, n);
            let res = pick(&mut rng, m, j);
            out.push((m, cells, res));
        }
    }
    out
}

#[test]
fn sampling_bounds_match_jacobi() {
    for (m, cells, res) in cases() {
        let g = GridSpectrum::new(m, cells.clone()).unwrap();
        let lam = SamplingSet::new(m, res.clone(), SetKind::Sampling).unwrap();
        let b = sampling_bounds(&g, &lam).unwrap();
        let (lo, hi) = gram_extremes(m, &res, &cells);
        let lo = if res.len() < cells.len() { 0.0 } else { lo };
        assert!((b.lower - lo).abs() < 1e-10, "m={m} I={cells:?} J={res:?}: {} vs {lo}", b.lower);
        assert!((b.upper - hi).abs() < 1e-10, "m={m} I={cells:?} J={res:?}: {} vs {hi}", b.upper);
    }
}

#[test]
fn riesz_bounds_match_jacobi() {
    for (m, cells, res) in cases() {
        let g = GridSpectrum::new(m, cells.clone()).unwrap();
        let gamma = SamplingSet::new(m, res.clone(), SetKind::Riesz).unwrap();
        let b = riesz_bounds(&g, &gamma).unwrap();
        let (lo, hi) = gram_extremes(m, &cells, &res);
        let lo = if res.len() > cells.len() { 0.0 } else { lo };
        assert!((b.lower - lo).abs() < 1e-10, "m={m} I={cells:?} J={res:?}: {} vs {lo}", b.lower);
        assert!((b.upper - hi).abs() < 1e-10, "m={m} I={cells:?} J={res:?}: {} vs {hi}", b.upper);
    }
}
