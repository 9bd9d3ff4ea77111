//! Seeded random instance generators shared by the self-test runner and the
//! test suites. All randomness flows through a caller-owned [`ChaCha8Rng`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::apps::cp::CpScenario;
use crate::apps::doa::DoaScenario;
use crate::matcore::{HermitianMatrix, Matrix, C64};
use crate::submatrix::kruskal_rank_psd;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut TestRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Circularly symmetric complex Gaussian with unit variance.
pub fn complex_normal(rng: &mut TestRng) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    C64::new(normal(rng) * s, normal(rng) * s)
}

pub fn gaussian_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn real_gaussian_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), 0.0))
}

/// Modified Gram-Schmidt on the columns. Columns that collapse below 1e-12
/// relative norm are dropped, so the result may be narrower than `m`.
pub fn orthonormalize(m: &Matrix) -> Matrix {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for j in 0..m.cols() {
        let mut v = m.column(j);
        let original: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for b in &basis {
                let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 * original.max(f64::MIN_POSITIVE) {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    Matrix::from_fn(m.rows(), basis.len(), |i, j| basis[j][i])
}

/// Rank-`r` orthogonal projection `Q Q^*` from an orthonormalized Gaussian frame.
pub fn random_projection(rng: &mut TestRng, n: usize, r: usize) -> HermitianMatrix {
    assert!(r <= n);
    loop {
        let q = orthonormalize(&gaussian_matrix(rng, n, r));
        if q.cols() == r {
            return HermitianMatrix::outer_gram(&q);
        }
    }
}

/// `F F^*` with `F` an `n x rank` complex Gaussian frame.
pub fn random_psd(rng: &mut TestRng, n: usize, rank: usize) -> HermitianMatrix {
    HermitianMatrix::outer_gram(&gaussian_matrix(rng, n, rank))
}

/// Same as [`random_psd`] with a real frame.
pub fn random_real_psd(rng: &mut TestRng, n: usize, rank: usize) -> HermitianMatrix {
    HermitianMatrix::outer_gram(&real_gaussian_matrix(rng, n, rank))
}

pub fn random_hermitian(rng: &mut TestRng, n: usize) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&gaussian_matrix(rng, n, n))
}

/// Rejection sampling over Gram matrices of random rank-`rank` frames until
/// the Kruskal rank is at least `min_kruskal`. Gives up after 1000 draws.
pub fn random_psd_with_kruskal(
    rng: &mut TestRng,
    n: usize,
    rank: usize,
    min_kruskal: usize,
    tol: f64,
) -> Option<HermitianMatrix> {
    for _ in 0..1000 {
        let a = random_psd(rng, n, rank);
        if kruskal_rank_psd(&a, tol, u64::MAX).ok()? >= min_kruskal {
            return Some(a);
        }
    }
    None
}

/// `k` spatial frequencies in `[-pi, pi)` with pairwise (circular) gap at least `min_gap`.
pub fn random_frequencies(rng: &mut TestRng, k: usize, min_gap: f64) -> Vec<f64> {
    use std::f64::consts::PI;
    loop {
        let w: Vec<f64> = (0..k).map(|_| rng.random_range(-PI..PI)).collect();
        let ok = (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let d = (w[i] - w[j]).abs();
                d.min(2.0 * PI - d) >= min_gap
            })
        });
        if ok {
            return w;
        }
    }
}

/// DOA scenario with `N = n_sensors`, `P = subarrays`, `K = k` sources and a
/// source covariance of the given rank.
pub fn random_doa_scenario(
    rng: &mut TestRng,
    n_sensors: usize,
    subarrays: usize,
    k: usize,
    rank: usize,
) -> DoaScenario {
    let omega = random_frequencies(rng, k, 0.1);
    let sigma_s = random_psd(rng, k, rank);
    DoaScenario::new(n_sensors, subarrays, omega, sigma_s).expect("generator emits valid scenarios")
}

/// Real `rows x cols` loading matrix of the given rank with unit-norm columns.
pub fn random_loading(rng: &mut TestRng, rows: usize, cols: usize, rank: usize) -> Matrix {
    let f = real_gaussian_matrix(rng, rows, rank);
    let w = real_gaussian_matrix(rng, rank, cols);
    let m = f.matmul(&w).expect("conformable");
    let norms: Vec<f64> = (0..cols).map(|j| m.column_norm(j)).collect();
    Matrix::from_fn(rows, cols, |i, j| m[(i, j)] / norms[j])
}

pub fn random_cp_scenario(
    rng: &mut TestRng,
    p: usize,
    q: usize,
    d: usize,
    lags: usize,
    rank_a: usize,
    rank_b: usize,
) -> CpScenario {
    let a = random_loading(rng, p, d, rank_a);
    let b = random_loading(rng, q, d, rank_b);
    let g = (0..lags).map(|_| (0..d).map(|_| normal(rng)).collect()).collect();
    CpScenario::new(a, b, g).expect("generator emits valid scenarios")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{is_orthogonal_projection, rank_numeric};

    #[test]
    fn projections_have_requested_rank() {
        let mut r = rng(3);
        for n in 1..7 {
            for k in 0..=n {
                let p = random_projection(&mut r, n, k);
                let t = is_orthogonal_projection(&p, 1e-10).unwrap();
                assert_eq!(t.rank, Some(k));
            }
        }
    }

    #[test]
    fn psd_rank_is_fixed_by_construction() {
        let mut r = rng(5);
        for k in 0..5 {
            assert_eq!(rank_numeric(&random_psd(&mut r, 6, k), 1e-9).unwrap(), k);
        }
    }

    #[test]
    fn reproducible() {
        let a = random_hermitian(&mut rng(11), 4);
        let b = random_hermitian(&mut rng(11), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn loadings_have_unit_columns() {
        let mut r = rng(9);
        let m = random_loading(&mut r, 5, 4, 2);
        for j in 0..4 {
            assert!((m.column_norm(j) - 1.0).abs() < 1e-12);
        }
        assert!(m.is_real());
    }
}
