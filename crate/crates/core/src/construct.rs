//! Periodic sampling, Bessel and Riesz sets built from the selection
//! engines, and the stage-by-stage exhaustion of a general spectrum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::selection::{
    bss_unweighted, ceil_tol, rit_constant, rit_select, sampling_constant, upper_select, SelectionResult, VectorSystem,
};
use crate::spectrum::{complement, quantize_inner, GridSpectrum, IntervalSet};
use crate::verify::{riesz_bounds, sampling_bounds};
use crate::{Density, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Sampling,
    Bessel,
    Riesz,
}

/// `Λ = J + mℤ` for a nonempty residue set `J ⊂ {0, …, m−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SamplingSet {
    m: usize,
    residues: Vec<usize>,
    kind: SetKind,
}

impl SamplingSet {
    /// Sorts `residues`; rejects empty, duplicate or out-of-range input.
    pub fn new(m: usize, mut residues: Vec<usize>, kind: SetKind) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGrid("period must be positive".into()));
        }
        if residues.is_empty() {
            return Err(Error::InvalidGrid("no residues".into()));
        }
        residues.sort_unstable();
        if let Some(w) = residues.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateResidue(w[0]));
        }
        if let Some(&r) = residues.last().filter(|&&r| r >= m) {
            return Err(Error::ResidueOutOfRange { residue: r, m });
        }
        Ok(SamplingSet { m, residues, kind })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn residues(&self) -> &[usize] {
        &self.residues
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains_residue(&self, r: usize) -> bool {
        self.residues.binary_search(&r).is_ok()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.contains_residue(x.rem_euclid(self.m as i64) as usize)
    }

    /// `|J|/m`, which is `D⁻ = D⁺ = D♯` of `Λ`.
    pub fn density(&self) -> Density {
        Density::new(self.residues.len() as u64, self.m as u64)
    }
}

/// A constructed set together with its recomputed bounds and checks.
///
/// `target` is `C(d)·|S|` for sampling sets and `(1−√(1−d))²·|Ω|` for
/// Riesz sets. `size_limit` is `⌈(1+d)n⌉` (an upper limit) for sampling
/// sets and `⌈(1−d)n⌉` (a lower limit) for Riesz sets. `constant` is the
/// empirical Bessel constant `upper/|S|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub spectrum: GridSpectrumRecord,
    pub set: SamplingSet,
    pub d: Option<f64>,
    pub k: Option<usize>,
    pub certified_lower: f64,
    pub certified_upper: f64,
    pub density: Density,
    pub landau_floor: Density,
    pub landau_ok: bool,
    pub target: Option<f64>,
    pub size_limit: Option<usize>,
    pub constant: Option<f64>,
    pub pass: bool,
    pub selection: SelectionResult,
}

/// Serialized form of a [`GridSpectrum`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpectrumRecord {
    pub m: usize,
    pub cells: Vec<usize>,
}

impl From<&GridSpectrum> for GridSpectrumRecord {
    fn from(g: &GridSpectrum) -> Self {
        GridSpectrumRecord { m: g.m(), cells: g.cells().to_vec() }
    }
}

/// Versioned header comment for CSV output.
pub const CSV_COMMENT: &str = "# pwsample report v1";
/// CSV columns of one report row.
pub const CSV_COLUMNS: [&str; 9] = ["m", "n", "J", "density", "landau_floor", "lower", "upper", "C_target", "pass"];

impl ConstructionReport {
    pub fn n(&self) -> usize {
        self.spectrum.cells.len()
    }

    /// Row matching [`CSV_COLUMNS`]; `J` is the residue count.
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.spectrum.m.to_string(),
            self.n().to_string(),
            self.set.len().to_string(),
            self.density.to_string(),
            self.landau_floor.to_string(),
            self.certified_lower.to_string(),
            self.certified_upper.to_string(),
            self.target.map(|t| t.to_string()).unwrap_or_default(),
            self.pass.to_string(),
        ]
    }
}

/// `Λ = j + mℤ`, the exact sampling set for `[0, 2π/m]`.
pub fn canonical_example(m: usize, j: usize) -> Result<SamplingSet> {
    SamplingSet::new(m, vec![j], SetKind::Sampling)
}

/// Sampling set for `PW_S` with `|J| ≤ ⌈(1+d)n⌉` and lower frame bound
/// at least `C(d)·|S|`.
pub fn build_sampling(g: &GridSpectrum, d: f64) -> Result<ConstructionReport> {
    let sys = VectorSystem::fourier_rows(g.m(), g.cells())?;
    let selection = bss_unweighted(&sys, d)?;
    let set = SamplingSet::new(g.m(), selection.indices.clone(), SetKind::Sampling)?;
    let bounds = sampling_bounds(g, &set)?;
    let target = sampling_constant(d) * g.measure().to_f64();
    let limit = ceil_tol((1.0 + d) * g.n() as f64);
    let pass = bounds.lower >= target && set.len() <= limit && set.density() >= g.measure();
    Ok(ConstructionReport {
        spectrum: g.into(),
        set,
        d: Some(d),
        k: None,
        certified_lower: bounds.lower,
        certified_upper: bounds.upper,
        density: bounds.density,
        landau_floor: bounds.landau_floor,
        landau_ok: bounds.landau_ok,
        target: Some(target),
        size_limit: Some(limit),
        constant: None,
        pass,
        selection,
    })
}

/// Bessel set of `k` residues (default `n + 1`, at most `m`) with small
/// upper bound; reports `upper/|S|`.
pub fn build_bessel(g: &GridSpectrum, k: Option<usize>) -> Result<ConstructionReport> {
    let k = k.unwrap_or((g.n() + 1).min(g.m()));
    if k < g.n() {
        return Err(Error::InvalidParameter(format!("k = {k} below n = {}", g.n())));
    }
    let sys = VectorSystem::fourier_rows(g.m(), g.cells())?;
    let selection = upper_select(&sys, k)?;
    let set = SamplingSet::new(g.m(), selection.indices.clone(), SetKind::Bessel)?;
    let bounds = sampling_bounds(g, &set)?;
    let constant = bounds.upper / g.measure().to_f64();
    Ok(ConstructionReport {
        spectrum: g.into(),
        set,
        d: None,
        k: Some(k),
        certified_lower: bounds.lower,
        certified_upper: bounds.upper,
        density: bounds.density,
        landau_floor: bounds.landau_floor,
        landau_ok: bounds.landau_ok,
        target: None,
        size_limit: None,
        constant: Some(constant),
        pass: bounds.upper.is_finite() && bounds.density >= g.measure(),
        selection,
    })
}

/// Riesz exponentials `J + mℤ` in `L²(Ω)` with `|J| ≥ ⌈(1−d)n⌉` and lower
/// Riesz bound at least `(1−√(1−d))²·|Ω|`.
pub fn build_riesz(omega: &GridSpectrum, d: f64) -> Result<ConstructionReport> {
    let sys = VectorSystem::fourier_columns(omega.m(), omega.cells())?;
    let selection = rit_select(&sys, d)?;
    let set = SamplingSet::new(omega.m(), selection.indices.clone(), SetKind::Riesz)?;
    let bounds = riesz_bounds(omega, &set)?;
    let target = rit_constant(d) * omega.measure().to_f64();
    let limit = ceil_tol((1.0 - d) * omega.n() as f64);
    let pass = bounds.lower >= target && set.len() >= limit && set.density() <= omega.measure();
    Ok(ConstructionReport {
        spectrum: omega.into(),
        set,
        d: Some(d),
        k: None,
        certified_lower: bounds.lower,
        certified_upper: bounds.upper,
        density: bounds.density,
        landau_floor: bounds.landau_floor,
        landau_ok: bounds.landau_ok,
        target: Some(target),
        size_limit: Some(limit),
        constant: None,
        pass,
        selection,
    })
}

/// Which construction each exhaustion stage runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExhaustMode {
    Sampling,
    Bessel,
}

/// One stage of the exhaustion: inner quantization `S_m`, its construction
/// and the complementary residues `Γ = {0, …, m−1} ∖ J` with their Riesz
/// bound over `T ∖ S_m` (`None` when `Γ` is empty).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionStage {
    pub m: usize,
    pub measure: Density,
    pub report: ConstructionReport,
    pub gamma: Vec<usize>,
    pub gamma_riesz_lower: Option<f64>,
}

/// Runs one construction per grid order in `schedule` (strictly
/// increasing) on the inner quantization of `s`.
pub fn exhaust_general(s: &IntervalSet, d: f64, schedule: &[usize], mode: ExhaustMode) -> Result<Vec<ExhaustionStage>> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty schedule".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("schedule must be strictly increasing".into()));
    }
    quantize_inner(s, schedule[0])?;
    schedule.par_iter().map(|&m| stage(s, d, m, mode)).collect()
}

fn stage(s: &IntervalSet, d: f64, m: usize, mode: ExhaustMode) -> Result<ExhaustionStage> {
    let g = quantize_inner(s, m)?;
    let report = match mode {
        ExhaustMode::Sampling => build_sampling(&g, d)?,
        ExhaustMode::Bessel => build_bessel(&g, None)?,
    };
    let gamma: Vec<usize> = (0..m).filter(|r| !report.set.contains_residue(*r)).collect();
    let gamma_riesz_lower = if gamma.is_empty() {
        None
    } else {
        let set = SamplingSet::new(m, gamma.clone(), SetKind::Riesz)?;
        Some(match complement(&g) {
            Ok(rest) => riesz_bounds(&rest, &set)?.lower,
            Err(Error::EmptyComplement) => 0.0,
            Err(e) => return Err(e),
        })
    };
    Ok(ExhaustionStage { m, measure: g.measure(), report, gamma, gamma_riesz_lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dft_submatrix, gram, hermitian_eigenvalues};
    use crate::selection::{brute_force_best, Objective};

    fn grid(m: usize, cells: &[usize]) -> GridSpectrum {
        GridSpectrum::new(m, cells.to_vec()).unwrap()
    }

    #[test]
    fn sampling_set_validation() {
        assert!(SamplingSet::new(4, vec![], SetKind::Sampling).is_err());
        assert_eq!(SamplingSet::new(4, vec![1, 1], SetKind::Sampling), Err(Error::DuplicateResidue(1)));
        assert_eq!(SamplingSet::new(4, vec![4], SetKind::Sampling), Err(Error::ResidueOutOfRange { residue: 4, m: 4 }));
        let s = SamplingSet::new(4, vec![2, 0], SetKind::Bessel).unwrap();
        assert_eq!(s.residues(), &[0, 2]);
        assert!(s.contains(-2) && s.contains(8) && !s.contains(-3));
    }

    #[test]
    fn canonical_examples() {
        for (m, j, want) in [(4, 1, 0.25), (1, 0, 1.0), (8, 5, 0.125)] {
            let lam = canonical_example(m, j).unwrap();
            let b = sampling_bounds(&grid(m, &[0]), &lam).unwrap();
            assert!((b.lower - want).abs() < 1e-12 && (b.upper - want).abs() < 1e-12);
            assert_eq!(lam.density(), Density::new(1, m as u64));
        }
    }

    #[test]
    fn sampling_examples() {
        let r = build_sampling(&grid(4, &[0]), 1.0).unwrap();
        assert_eq!(r.set.len(), 1);
        assert!((r.certified_lower - 0.25).abs() < 1e-12 && (r.certified_upper - 0.25).abs() < 1e-12);

        let g = grid(4, &[0, 1]);
        let r = build_sampling(&g, 1.0).unwrap();
        assert!(r.pass && r.set.len() <= 4);
        assert!(r.certified_lower >= sampling_constant(1.0) * 0.5);
        let sys = VectorSystem::fourier_rows(4, &[0, 1]).unwrap();
        let (_, best) = brute_force_best(&sys, r.set.len(), Objective::MaxLambdaMin).unwrap();
        assert!(best >= r.certified_lower - 1e-12);

        let r = build_sampling(&GridSpectrum::full(6).unwrap(), 0.5).unwrap();
        assert_eq!(r.set.len(), 6);
        assert!((r.certified_lower - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_match_independent_gram() {
        let g = grid(32, &[0, 1, 7, 20]);
        let r = build_sampling(&g, 1.0).unwrap();
        let f = dft_submatrix(32, r.set.residues(), g.cells()).unwrap();
        let ev = hermitian_eigenvalues(&gram(&f)).unwrap();
        assert!((ev[0] / 32.0 - r.certified_lower).abs() <= 1e-9 * r.certified_lower);
        assert!((ev[3] / 32.0 - r.certified_upper).abs() <= 1e-9 * r.certified_upper);
    }

    #[test]
    fn bessel_examples() {
        let r = build_bessel(&grid(4, &[0]), Some(2)).unwrap();
        assert_eq!(r.set.len(), 2);
        assert!((r.certified_upper - 0.5).abs() < 1e-12);
        assert!((r.constant.unwrap() - 2.0).abs() < 1e-12);
        let r = build_bessel(&grid(4, &[0, 1]), Some(2)).unwrap();
        assert!((r.certified_upper - 0.5).abs() < 1e-12 && (r.constant.unwrap() - 1.0).abs() < 1e-12);
        let r = build_bessel(&GridSpectrum::full(5).unwrap(), Some(5)).unwrap();
        assert!((r.certified_upper - 1.0).abs() < 1e-12);
        assert_eq!(build_bessel(&grid(4, &[0]), None).unwrap().set.len(), 2);
        assert!(matches!(build_bessel(&grid(4, &[0]), Some(5)), Err(Error::KTooLarge { .. })));
    }

    #[test]
    fn riesz_examples() {
        let r = build_riesz(&grid(2, &[0]), 0.75).unwrap();
        assert_eq!(r.set.len(), 1);
        assert!((r.certified_lower - 0.5).abs() < 1e-12);
        let r = build_riesz(&GridSpectrum::full(8).unwrap(), 0.5).unwrap();
        assert_eq!(r.set.len(), 8);
        assert!((r.certified_lower - 1.0).abs() < 1e-12);
        let r = build_riesz(&grid(8, &[0, 1, 2, 3]), 0.5).unwrap();
        assert!(r.pass && r.certified_lower >= 0.0428932188134524);
    }

    #[test]
    fn csv_row_shape() {
        let r = build_sampling(&grid(4, &[0]), 1.0).unwrap();
        let row = r.csv_record();
        assert_eq!(row.len(), CSV_COLUMNS.len());
        assert_eq!(&row[..5], &["4", "1", "1", "1/4", "1/4"]);
        assert_eq!(row[8], "true");
    }

    #[test]
    fn exhaustion_of_dyadic_half() {
        let s = IntervalSet::new(vec![(0.0, std::f64::consts::PI)]).unwrap();
        let stages = exhaust_general(&s, 1.0, &[2, 4, 8], ExhaustMode::Sampling).unwrap();
        assert_eq!(stages.len(), 3);
        for st in &stages {
            assert_eq!(st.measure, Density::new(1, 2));
            assert!(st.report.certified_lower >= sampling_constant(1.0) / 2.0);
            assert_eq!(st.gamma.len() + st.report.set.len(), st.m);
        }
    }

    #[test]
    fn single_stage_is_build_sampling() {
        let s = IntervalSet::new(vec![(0.3, 0.9), (2.0, 2.5)]).unwrap();
        let stages = exhaust_general(&s, 1.0, &[32], ExhaustMode::Sampling).unwrap();
        let direct = build_sampling(&quantize_inner(&s, 32).unwrap(), 1.0).unwrap();
        assert_eq!(stages[0].report, direct);
    }

    #[test]
    fn exhaustion_input_errors() {
        let s = IntervalSet::new(vec![(0.3, 0.9)]).unwrap();
        assert!(matches!(exhaust_general(&s, 1.0, &[2, 64], ExhaustMode::Sampling), Err(Error::NoCellFits { m: 2 })));
        assert!(exhaust_general(&s, 1.0, &[64, 32], ExhaustMode::Sampling).is_err());
        let stages = exhaust_general(&s, 1.0, &[64, 128], ExhaustMode::Bessel).unwrap();
        assert!(stages.iter().all(|st| st.report.set.len() == st.report.n() + 1));
    }
}
