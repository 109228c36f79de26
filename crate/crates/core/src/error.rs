use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval set: {0}")]
    InvalidIntervals(String),

    #[error("invalid grid spectrum: {0}")]
    InvalidGrid(String),

    #[error("no grid cell of order {m} fits inside the spectrum")]
    NoCellFits { m: usize },

    #[error("complement is empty: every residue is already present")]
    EmptyComplement,

    #[error("residue {residue} out of range for order {m}")]
    ResidueOutOfRange { residue: usize, m: usize },

    #[error("duplicate residue {0}")]
    DuplicateResidue(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("eigendecomposition failed to converge")]
    EigenFailed,

    #[error("shift lies inside or too close to the spectrum (margin {margin:.3e})")]
    ShiftInsideSpectrum { margin: f64 },

    #[error("vector system is not Parseval (deviation {deviation:.3e})")]
    NotParseval { deviation: f64 },

    #[error("vector system is not equal-norm (spread {spread:.3e})")]
    NotEqualNorm { spread: f64 },

    #[error("no feasible candidate at step {step}")]
    NoFeasibleCandidate { step: usize },

    #[error("certificate failed: {what} = {value:.6e} misses target {target:.6e}")]
    CertificateFailed { what: &'static str, value: f64, target: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("k = {k} exceeds the number of vectors {m}")]
    KTooLarge { k: usize, m: usize },

    #[error("{count} subsets exceed the enumeration cap")]
    TooManySubsets { count: u128 },

    #[error("period mismatch: spectrum order {spectrum} vs set period {set}")]
    PeriodMismatch { spectrum: usize, set: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
