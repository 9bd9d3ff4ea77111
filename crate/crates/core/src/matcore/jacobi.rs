//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary on column/row `q`, then annihilates the now-real pivot with a real
//! plane rotation. Sweeps visit the strict upper triangle in row-major order.

use super::{HermitianMatrix, Matrix, C64};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
pub const OFF_DIAGONAL_RTOL: f64 = 1e-14;

/// Eigenvalues in non-increasing order with orthonormal eigenvectors stored
/// as the columns of `eigenvectors`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `U diag(lambda) U^*`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n();
        let u = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            for i in 0..n {
                let uik = u[(i, k)] * lam;
                for j in 0..n {
                    out[(i, j)] += uik * u[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruction_residual(&self, a: &HermitianMatrix) -> f64 {
        self.reconstruct().max_abs_diff(a.as_matrix()).unwrap_or(f64::INFINITY)
    }

    /// `max |U^*U - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.n();
        let g = self.eigenvectors.gram();
        g.max_abs_diff(&Matrix::identity(n)).unwrap_or(f64::INFINITY)
    }
}

fn off_diagonal_norm(w: &Matrix) -> f64 {
    let n = w.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(w: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let n = w.rows();
    let pivot = w[(p, q)];
    let b = pivot.norm();
    if b == 0.0 {
        return;
    }

    // Diagonal unitary making w[p][q] real and positive.
    let phase = pivot / b;
    let phase_conj = phase.conj();
    for k in 0..n {
        w[(k, q)] *= phase_conj;
    }
    for k in 0..n {
        w[(q, k)] *= phase;
    }
    for k in 0..n {
        v[(k, q)] *= phase_conj;
    }

    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let theta = (aqq - app) / (2.0 * b);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = wkp * c - wkq * s;
        w[(k, q)] = wkp * s + wkq * c;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = wpk * c - wqk * s;
        w[(q, k)] = wpk * s + wqk * c;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }

    w[(p, q)] = C64::new(0.0, 0.0);
    w[(q, p)] = C64::new(0.0, 0.0);
    w[(p, p)].im = 0.0;
    w[(q, q)].im = 0.0;
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.n();
    let mut w = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let target = OFF_DIAGONAL_RTOL * w.frobenius();

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&w);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&w);
    }

    let diag: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    Ok(SpectralDecomposition {
        eigenvalues: order.iter().map(|&i| diag[i]).collect(),
        eigenvectors: v.select_columns(&order),
    })
}

/// Eigenvalues only, non-increasing.
pub fn eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(a)?.eigenvalues)
}

pub fn lambda_min(a: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.lambda_min())
}
