//! Eigenvalue lower bounds and positivity certificates for Hadamard
//! (entrywise) products of Hermitian matrices.
//!
//! The crate is layered:
//!
//! - [`matcore`]: dense complex matrices, a cyclic Jacobi eigensolver for
//!   Hermitian matrices, PSD classification, numeric rank, Schur complements.
//! - [`submatrix`]: principal-submatrix enumeration, `mu_m`, Kruskal rank,
//!   effective condition number, minimum column-subset singular values.
//! - [`certify`]: the classical and quantitative lower bounds, the Löwner
//!   check, the bordered-projection decomposition and the certificates for
//!   projection and indefinite factors.
//! - [`apps`]: spatial smoothing for direction finding and the CP-factor
//!   spectral floor for matrix time series.
//! - [`cli`]: matrix/scenario file formats, JSON reports and subcommand
//!   dispatch for the `hadamard` binary.
//!
//! ```
//! use hadamard_core::certify::quantitative_bound;
//! use hadamard_core::matcore::HermitianMatrix;
//! use hadamard_core::Settings;
//!
//! let a = HermitianMatrix::from_real_rows(&[
//!     vec![2.0, 1.0, 1.0],
//!     vec![1.0, 1.0, 0.0],
//!     vec![1.0, 0.0, 1.0],
//! ])
//! .unwrap();
//! let b = HermitianMatrix::from_real_rows(&[
//!     vec![2.0, 1.0, 1.0],
//!     vec![1.0, 1.0, 1.0],
//!     vec![1.0, 1.0, 1.0],
//! ])
//! .unwrap();
//! let report = quantitative_bound(&a, &b, &Settings::default()).unwrap();
//! assert!(report.quantitative_bound > 0.065 && report.quantitative_bound < 0.066);
//! assert!(report.actual_lambda_min >= report.quantitative_bound);
//! ```

pub mod apps;
pub mod certify;
pub mod cli;
pub mod error;
pub mod matcore;
pub mod selftest;
pub mod submatrix;
pub mod testgen;

pub use error::{Error, Result};
pub use matcore::{HermitianMatrix, Matrix, SpectralDecomposition, C64};

/// Relative threshold for rank and definiteness decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative threshold for the Hermitian symmetry check on construction.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Maximum number of subsets a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Scale a relative tolerance with an absolute floor of `rel`.
#[inline]
pub fn scaled_tol(rel: f64, scale: f64) -> f64 {
    rel * scale.max(1.0)
}

/// Tolerance and enumeration budget shared by the bound engines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub budget: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Settings {
    pub fn new(tol: f64, budget: u64) -> Self {
        Settings { tol, budget }
    }
}
