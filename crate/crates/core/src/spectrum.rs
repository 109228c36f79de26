//! Spectra on the circle `[0, 2π]`: finite interval unions and unions of
//! grid cells `[2πr/m, 2π(r+1)/m]`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::{Density, Error, Result};

/// Containment tolerance for cell endpoints, in radians.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Finite union of disjoint half-open intervals `[lo, hi)` inside `[0, 2π]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Validates and sorts the intervals. Touching intervals are allowed,
    /// overlapping ones are rejected.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidIntervals("no intervals".into()));
        }
        for &(lo, hi) in &intervals {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidIntervals(format!("non-finite endpoint in [{lo}, {hi}]")));
            }
            if lo < 0.0 || hi > TAU + ENDPOINT_TOL || lo >= hi {
                return Err(Error::InvalidIntervals(format!("[{lo}, {hi}] is not a nonempty sub-interval of [0, 2π]")));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in intervals.windows(2) {
            if w[1].0 < w[0].1 - ENDPOINT_TOL {
                return Err(Error::InvalidIntervals(format!(
                    "[{}, {}] overlaps [{}, {}]",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        for iv in &mut intervals {
            iv.1 = iv.1.min(TAU);
        }
        Ok(IntervalSet { intervals })
    }

    pub fn full_circle() -> Self {
        IntervalSet { intervals: vec![(0.0, TAU)] }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Normalized Lebesgue measure `Σ (hi − lo) / 2π`.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum::<f64>() / TAU
    }

    // Touching intervals merged, so a cell straddling a junction counts as contained.
    fn merged(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.intervals.len());
        for &(lo, hi) in &self.intervals {
            match out.last_mut() {
                Some(last) if lo <= last.1 + ENDPOINT_TOL => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out
    }
}

fn cell(m: usize, r: usize) -> (f64, f64) {
    (TAU * r as f64 / m as f64, TAU * (r + 1) as f64 / m as f64)
}

/// Union of the grid cells `[2πr/m, 2π(r+1)/m)` for `r ∈ I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GridSpectrum {
    m: usize,
    cells: Vec<usize>,
}

impl GridSpectrum {
    /// Sorts the residues; rejects empty, duplicate or out-of-range input.
    pub fn new(m: usize, mut cells: Vec<usize>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGrid("grid order must be positive".into()));
        }
        if cells.is_empty() {
            return Err(Error::InvalidGrid("no cells".into()));
        }
        cells.sort_unstable();
        for w in cells.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateResidue(w[0]));
            }
        }
        if let Some(&r) = cells.last() {
            if r >= m {
                return Err(Error::ResidueOutOfRange { residue: r, m });
            }
        }
        Ok(GridSpectrum { m, cells })
    }

    pub fn full(m: usize) -> Result<Self> {
        GridSpectrum::new(m, (0..m).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Number of cells `n = |I|`.
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn is_full(&self) -> bool {
        self.cells.len() == self.m
    }

    pub fn measure(&self) -> Density {
        measure(self)
    }

    pub fn contains(&self, r: usize) -> bool {
        self.cells.binary_search(&r).is_ok()
    }

    /// The cell union as an interval set, adjacent cells merged.
    pub fn to_intervals(&self) -> IntervalSet {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &r in &self.cells {
            match runs.last_mut() {
                Some(last) if last.1 == r => last.1 = r + 1,
                _ => runs.push((r, r + 1)),
            }
        }
        let intervals = runs.into_iter().map(|(a, b)| (cell(self.m, a).0, cell(self.m, b - 1).1)).collect();
        IntervalSet { intervals }
    }
}

/// Cells fully contained in `s`: the inner approximation `S_m ⊂ S`.
pub fn quantize_inner(s: &IntervalSet, m: usize) -> Result<GridSpectrum> {
    if m == 0 {
        return Err(Error::InvalidGrid("grid order must be positive".into()));
    }
    let merged = s.merged();
    let cells: Vec<usize> = (0..m)
        .filter(|&r| {
            let (a, b) = cell(m, r);
            merged.iter().any(|&(lo, hi)| lo <= a + ENDPOINT_TOL && b <= hi + ENDPOINT_TOL)
        })
        .collect();
    if cells.is_empty() {
        return Err(Error::NoCellFits { m });
    }
    GridSpectrum::new(m, cells)
}

/// Cells meeting `s` in positive measure; the union covers `s`.
pub fn quantize_outer(s: &IntervalSet, m: usize) -> Result<GridSpectrum> {
    if m == 0 {
        return Err(Error::InvalidGrid("grid order must be positive".into()));
    }
    let cells: Vec<usize> = (0..m)
        .filter(|&r| {
            let (a, b) = cell(m, r);
            s.intervals.iter().any(|&(lo, hi)| b.min(hi) - a.max(lo) > ENDPOINT_TOL)
        })
        .collect();
    if cells.is_empty() {
        return Err(Error::NoCellFits { m });
    }
    GridSpectrum::new(m, cells)
}

/// Cells of `T ∖ S`.
pub fn complement(g: &GridSpectrum) -> Result<GridSpectrum> {
    if g.is_full() {
        return Err(Error::EmptyComplement);
    }
    let cells = (0..g.m).filter(|r| !g.contains(*r)).collect();
    GridSpectrum::new(g.m, cells)
}

/// `|S| = n/m`, exact.
pub fn measure(g: &GridSpectrum) -> Density {
    Density::new(g.n() as u64, g.m as u64)
}

/// JSON spectrum descriptor: `{"m": int, "cells": [ints]}` or
/// `{"intervals": [[lo, hi], ...]}`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum SpectrumDescriptor {
    Grid { m: usize, cells: Vec<usize> },
    Intervals { intervals: Vec<(f64, f64)> },
}

/// A parsed descriptor, validated.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    Grid(GridSpectrum),
    Intervals(IntervalSet),
}

impl Spectrum {
    pub fn from_json(text: &str) -> Result<Self> {
        let desc: SpectrumDescriptor =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("spectrum descriptor: {e}")))?;
        match desc {
            SpectrumDescriptor::Grid { m, cells } => Ok(Spectrum::Grid(GridSpectrum::new(m, cells)?)),
            SpectrumDescriptor::Intervals { intervals } => Ok(Spectrum::Intervals(IntervalSet::new(intervals)?)),
        }
    }
}
