//! Dense Hermitian matrix foundation.

mod dense;
mod jacobi;

use std::ops::{Deref, Index};

pub use dense::{Matrix, C64};
pub use jacobi::{eig_hermitian, eigenvalues, lambda_min, SpectralDecomposition, MAX_SWEEPS, OFF_DIAGONAL_RTOL};

use crate::error::{Error, Result};
use crate::{scaled_tol, SYMMETRY_TOL};

/// Square complex matrix that is Hermitian within the symmetry tolerance.
///
/// Storage is the Hermitian part `(M + M^*) / 2` of whatever was supplied, so
/// downstream code may rely on exact conjugate symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    /// Validate with the default symmetry tolerance.
    pub fn new(m: Matrix) -> Result<Self> {
        Self::with_tolerance(m, SYMMETRY_TOL)
    }

    /// Validate `|m_ij - conj(m_ji)| <= tol_rel * max(1, max|m_ij|)`.
    pub fn with_tolerance(m: Matrix, tol_rel: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let tol = scaled_tol(tol_rel, m.max_abs());
        let asymmetry = m.hermitian_defect();
        if asymmetry > tol || asymmetry.is_nan() {
            return Err(Error::NotHermitian { asymmetry, tol });
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(m + m^*) / 2` without validation. Used for results that are Hermitian
    /// up to rounding (products, Gram matrices, differences).
    pub fn hermitian_part(m: &Matrix) -> Self {
        assert!(m.is_square(), "hermitian_part of a non-square matrix");
        let n = m.rows();
        let mut out = m.clone();
        for i in 0..n {
            out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        HermitianMatrix(out)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(Matrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(Matrix::zeros(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        HermitianMatrix(Matrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(d[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// `F F^*` for any `F` (positive semidefinite by construction).
    pub fn outer_gram(f: &Matrix) -> Self {
        Self::hermitian_part(&f.matmul(&f.adjoint()).expect("conformable"))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Real diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn min_diagonal(&self) -> f64 {
        self.diagonal().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `I ∘ self`.
    pub fn diagonal_part(&self) -> Self {
        Self::from_diagonal(&self.diagonal())
    }

    pub fn hadamard(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        hadamard(self, other)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(Self::hermitian_part(&self.0.sub(&other.0)?))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(Self::hermitian_part(&self.0.add(&other.0)?))
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(s))
    }

    /// `self - c I`.
    pub fn shift(&self, c: f64) -> HermitianMatrix {
        let mut m = self.0.clone();
        for i in 0..self.n() {
            m[(i, i)] -= c;
        }
        HermitianMatrix(m)
    }

    /// Entrywise complex conjugate (the transpose of a Hermitian matrix).
    pub fn conj(&self) -> HermitianMatrix {
        HermitianMatrix(self.0.conj())
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        eig_hermitian(self)
    }
}

impl Deref for HermitianMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    fn index(&self, ij: (usize, usize)) -> &C64 {
        &self.0[ij]
    }
}

impl TryFrom<Matrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        HermitianMatrix::new(m)
    }
}

/// Entrywise product `A ∘ B`.
pub fn hadamard(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::hermitian_part(&a.0.hadamard(&b.0)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefiniteSingular,
    Indefinite,
}

/// Definiteness class with the deciding eigenvalue `lambda_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdClass {
    pub class: Definiteness,
    pub witness: f64,
}

impl PsdClass {
    pub fn is_psd(&self) -> bool {
        self.class != Definiteness::Indefinite
    }

    pub fn is_pd(&self) -> bool {
        self.class == Definiteness::PositiveDefinite
    }
}

/// Classify from a non-increasing spectrum with threshold `tol_rel * max(1, lambda_1)`.
pub fn classify_spectrum(eigenvalues: &[f64], tol_rel: f64) -> PsdClass {
    let lambda_1 = eigenvalues.first().copied().unwrap_or(0.0);
    let lambda_min = eigenvalues.last().copied().unwrap_or(0.0);
    let tol = scaled_tol(tol_rel, lambda_1);
    let class = if lambda_min > tol {
        Definiteness::PositiveDefinite
    } else if lambda_min < -tol {
        Definiteness::Indefinite
    } else {
        Definiteness::PositiveSemidefiniteSingular
    };
    PsdClass {
        class,
        witness: lambda_min,
    }
}

pub fn classify_psd(a: &HermitianMatrix, tol_rel: f64) -> Result<PsdClass> {
    Ok(classify_spectrum(&eigenvalues(a)?, tol_rel))
}

/// Number of eigenvalues with `|lambda| > tol_rel * max(1, max|lambda|)`.
pub fn rank_of_spectrum(eigenvalues: &[f64], tol_rel: f64) -> usize {
    let largest = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tol = scaled_tol(tol_rel, largest);
    eigenvalues.iter().filter(|x| x.abs() > tol).count()
}

pub fn rank_numeric(a: &HermitianMatrix, tol_rel: f64) -> Result<usize> {
    Ok(rank_of_spectrum(&eigenvalues(a)?, tol_rel))
}

/// Smallest eigenvalue that clears the rank threshold, if any.
pub fn lambda_min_positive(eigenvalues: &[f64], tol_rel: f64) -> Option<f64> {
    let largest = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tol = scaled_tol(tol_rel, largest);
    eigenvalues.iter().copied().filter(|&x| x > tol).reduce(f64::min)
}

/// Guard on `|trace - round(trace)|` when reading a projection rank off its trace.
pub const TRACE_ROUNDING_GUARD: f64 = 1e-6;

/// Round a projection trace to its rank.
pub fn trace_rank(trace: f64) -> Result<usize> {
    let r = trace.round();
    if (trace - r).abs() > TRACE_ROUNDING_GUARD || r < 0.0 {
        return Err(Error::NonIntegralTrace { trace });
    }
    Ok(r as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionTest {
    pub is_projection: bool,
    /// Rounded trace; present only when `is_projection`.
    pub rank: Option<usize>,
}

/// Hermitian and idempotent within absolute tolerance `tol`.
pub fn is_orthogonal_projection(p: &Matrix, tol: f64) -> Result<ProjectionTest> {
    let not = ProjectionTest {
        is_projection: false,
        rank: None,
    };
    if !p.is_square() {
        return Ok(not);
    }
    if p.hermitian_defect() > tol {
        return Ok(not);
    }
    let p2 = p.matmul(p)?;
    if p2.max_abs_diff(p)? > tol {
        return Ok(not);
    }
    Ok(ProjectionTest {
        is_projection: true,
        rank: Some(trace_rank(p.trace().re)?),
    })
}

/// Schur complement of the pivot `m_ii`: `M_1 - y y^* / m_ii` where `M_1`
/// deletes row and column `i` and `y` is column `i` without entry `i`.
pub fn schur_complement(m: &HermitianMatrix, i: usize, tol_rel: f64) -> Result<HermitianMatrix> {
    let n = m.n();
    if i >= n {
        return Err(Error::InvalidIndexSet(format!(
            "pivot index {} out of range for n = {}",
            i, n
        )));
    }
    let pivot = m[(i, i)].re;
    if pivot <= scaled_tol(tol_rel, m.max_abs()) {
        return Err(Error::NonPositivePivot { index: i, value: pivot });
    }
    let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
    let out = Matrix::from_fn(n - 1, n - 1, |a, b| {
        let (r, c) = (keep[a], keep[b]);
        m[(r, c)] - m[(r, i)] * m[(i, c)] / pivot
    });
    Ok(HermitianMatrix::hermitian_part(&out))
}
