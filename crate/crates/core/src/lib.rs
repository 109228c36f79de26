//! Deterministic construction of periodic sampling, Bessel and Riesz sets
//! for Paley–Wiener spaces with small spectrum, with exact bound
//! certification.
//!
//! A spectrum `S ⊂ [0, 2π]` is approximated by a union of grid cells
//! `[2πr/m, 2π(r+1)/m]`, `r ∈ I`. For a periodic set `Λ = J + mℤ` every
//! sampling (or Riesz) bound reduces to an extreme eigenvalue of the Gram
//! matrix of an `m`-point DFT submatrix, so the constructions below are
//! certified exactly rather than estimated.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`spectrum`] | interval unions, grid spectra, quantization |
//! | [`linalg`] | DFT submatrices, Gram matrices, Hermitian eigensolver |
//! | [`selection`] | barrier-potential selection engines and a brute-force oracle |
//! | [`construct`] | sampling / Bessel / Riesz sets and the exhaustion pipeline |
//! | [`verify`] | bounds, duality, densities, quadrature and time-domain checks |
//! | [`cli`] | command-line front end |

pub mod cli;
pub mod construct;
pub mod error;
pub mod linalg;
pub mod selection;
pub mod spectrum;
pub mod verify;

mod rational;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use rational::Density;
