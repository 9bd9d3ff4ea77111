//! Independent reference computations for the integration tests.
//!
//! Nothing here calls the eigensolver or the subset machinery of the crate:
//! eigenvalues come from Sylvester-inertia bisection on an LDL^* sweep,
//! ranks from modified Gram-Schmidt, subsets from bitmasks.

#![allow(dead_code)]

use std::path::PathBuf;

use hadamard_core::{HermitianMatrix, Matrix, C64};

pub type Dense = Vec<Vec<C64>>;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn dense(m: &Matrix) -> Dense {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn real(rows: &[&[f64]]) -> Dense {
    rows.iter()
        .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
        .collect()
}

/// Number of eigenvalues of the Hermitian `a` strictly below `sigma`, from the
/// signs of the pivots of `a - sigma I = L D L^*`.
#[allow(clippy::needless_range_loop)]
pub fn count_below(a: &Dense, sigma: f64) -> usize {
    let n = a.len();
    let scale = a.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let mut w: Dense = a.clone();
    for (i, row) in w.iter_mut().enumerate() {
        row[i] -= C64::new(sigma, 0.0);
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut d = w[k][k].re;
        if d == 0.0 {
            d = -f64::EPSILON * scale;
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let l = w[i][k] / d;
            for j in k + 1..n {
                let t = l * w[k][j];
                w[i][j] -= t;
            }
        }
    }
    negatives
}

/// Smallest eigenvalue by bisection on the inertia count.
pub fn lambda_min(a: &Dense) -> f64 {
    kth_eigenvalue(a, 0)
}

/// `k`-th smallest eigenvalue (0-based) by bisection.
pub fn kth_eigenvalue(a: &Dense, k: usize) -> f64 {
    let radius = a
        .iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let (mut lo, mut hi) = (-radius, radius);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * radius {
            break;
        }
        if count_below(a, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues, ascending.
pub fn spectrum(a: &Dense) -> Vec<f64> {
    (0..a.len()).map(|k| kth_eigenvalue(a, k)).collect()
}

pub fn principal(a: &Dense, idx: &[usize]) -> Dense {
    idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect()
}

fn bits(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

/// `mu_m` by enumerating every `m`-bit mask.
pub fn mu(a: &Dense, m: usize) -> f64 {
    let n = a.len();
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == m)
        .map(|mask| lambda_min(&principal(a, &bits(mask, n))))
        .fold(f64::INFINITY, f64::min)
}

/// Rank of a set of column vectors by two-pass modified Gram-Schmidt; a
/// column is dependent when its residual is below `rel` times the largest
/// input norm.
pub fn rank_of_columns(cols: &[Vec<C64>], rel: f64) -> usize {
    let scale = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        for _ in 0..2 {
            for q in &basis {
                let dot: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > rel * scale {
            basis.push(v.iter().map(|z| z / norm).collect());
        }
    }
    basis.len()
}

pub fn columns(a: &Dense) -> Vec<Vec<C64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect()
}

/// Kruskal rank by brute force over column subsets.
pub fn kruskal(a: &Dense, rel: f64) -> usize {
    let cols = columns(a);
    let n = cols.len();
    let mut k = 0;
    for q in 1..=n {
        let all = (0u32..1 << n)
            .filter(|mask| mask.count_ones() as usize == q)
            .all(|mask| {
                let chosen: Vec<Vec<C64>> = bits(mask, n).into_iter().map(|j| cols[j].clone()).collect();
                rank_of_columns(&chosen, rel) == q
            });
        if !all {
            break;
        }
        k = q;
    }
    k
}

/// `Σ̃_s` entrywise via the closed-form geometric sum
/// `Σ_{p<P} exp(i p (w_i - w_j)) = (1 - e^{iPδ}) / (1 - e^{iδ})`.
pub fn smoothed_covariance(omega: &[f64], sigma: &HermitianMatrix, p: usize) -> Dense {
    let k = omega.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let delta = omega[i] - omega[j];
                    let geo = if delta == 0.0 {
                        C64::new(p as f64, 0.0)
                    } else {
                        (C64::new(1.0, 0.0) - C64::from_polar(1.0, p as f64 * delta))
                            / (C64::new(1.0, 0.0) - C64::from_polar(1.0, delta))
                    };
                    sigma[(i, j)] * geo
                })
                .collect()
        })
        .collect()
}

/// `M_1 = Σ_k A G_k B^*B G_k A^*` by explicit index sums.
pub fn cp_m1(a: &Matrix, b: &Matrix, g: &[Vec<f64>]) -> Dense {
    let (p, d, q) = (a.rows(), a.cols(), b.rows());
    let btb = |i: usize, j: usize| -> C64 { (0..q).map(|r| b[(r, i)].conj() * b[(r, j)]).sum() };
    let mut out = vec![vec![C64::new(0.0, 0.0); p]; p];
    for (r, row) in out.iter_mut().enumerate() {
        for (s, entry) in row.iter_mut().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    let w: f64 = g.iter().map(|gk| gk[i] * gk[j]).sum();
                    *entry += a[(r, i)] * w * btb(i, j) * a[(s, j)].conj();
                }
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &Dense, b: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            worst = worst.max((z - b[(i, j)]).norm());
        }
    }
    worst
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

fn idempotency(a: &Dense) -> f64 {
    let sq = matmul(a, a);
    let mut worst: f64 = 0.0;
    for (r1, r2) in sq.iter().zip(a) {
        for (x, y) in r1.iter().zip(r2) {
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

fn trace(a: &Dense) -> f64 {
    (0..a.len()).map(|i| a[i][i].re).sum()
}

/// Largest residual of the bordered-projection identities for the rank-`r`
/// projection `proj`, split along its last row and column.
pub fn bordered_residual(proj: &Dense, r: usize) -> f64 {
    let m = proj.len() - 1;
    let p1: Dense = (0..m).map(|i| proj[i][..m].to_vec()).collect();
    let x: Vec<C64> = (0..m).map(|i| proj[i][m]).collect();
    let p = proj[m][m].re;
    let xn: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let mut worst = (xn - p * (1.0 - p)).abs();
    if p * (1.0 - p) < 1e-12 {
        let corner = p.round();
        worst = worst.max(xn).max(idempotency(&p1));
        return worst.max((trace(&p1) + corner - r as f64).abs());
    }
    let outer = |s: f64| -> Dense {
        (0..m)
            .map(|i| (0..m).map(|j| x[i] * x[j].conj() * s).collect())
            .collect()
    };
    let (a, b) = (outer(1.0 / p), outer(1.0 / xn));
    let q: Dense = (0..m).map(|i| (0..m).map(|j| p1[i][j] - a[i][j]).collect()).collect();
    let rr: Dense = (0..m).map(|i| (0..m).map(|j| q[i][j] + b[i][j]).collect()).collect();
    let qx = (0..m)
        .map(|i| (0..m).map(|j| q[i][j] * x[j]).sum::<C64>().norm())
        .fold(0.0, f64::max);
    worst
        .max(idempotency(&q))
        .max(qx)
        .max((trace(&q) - (r as f64 - 1.0)).abs())
        .max(idempotency(&rr))
        .max((trace(&rr) - r as f64).abs())
}
