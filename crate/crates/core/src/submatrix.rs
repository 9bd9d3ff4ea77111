//! Principal-submatrix enumeration and the combinatorial spectral quantities
//! built on it: `mu_m`, Kruskal rank, effective condition number and the
//! minimum column-subset singular value.
//!
//! Every enumeration is lexicographic and sequential, and refuses to start
//! when `C(n, m)` exceeds the caller's budget.

use crate::error::{Error, Result};
use crate::matcore::{classify_psd, classify_spectrum, eigenvalues, rank_of_spectrum, HermitianMatrix, Matrix};
use crate::{scaled_tol, SYMMETRY_TOL};

/// Size-`m` subsets of `{0, .., n-1}` in lexicographic order.
#[derive(Clone, Debug)]
pub struct SubsetIterator {
    n: usize,
    m: usize,
    current: Vec<usize>,
    done: bool,
}

impl SubsetIterator {
    pub fn new(n: usize, m: usize) -> Self {
        SubsetIterator {
            n,
            m,
            current: (0..m).collect(),
            done: m > n,
        }
    }
}

impl Iterator for SubsetIterator {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // Advance: rightmost position that can still move.
        let (n, m) = (self.n, self.m);
        match (0..m).rev().find(|&i| self.current[i] < n - m + i) {
            Some(i) => {
                self.current[i] += 1;
                for j in i + 1..m {
                    self.current[j] = self.current[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_budget(n: usize, m: usize, budget: u64) -> Result<u128> {
    let count = binomial(n, m);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded { n, m, count, budget });
    }
    Ok(count)
}

fn principal_unchecked(a: &HermitianMatrix, s: &[usize]) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&Matrix::from_fn(s.len(), s.len(), |i, j| a[(s[i], s[j])]))
}

/// Rows and columns of `a` restricted to the strictly increasing index list `s`.
pub fn principal_submatrix(a: &HermitianMatrix, s: &[usize]) -> Result<HermitianMatrix> {
    let n = a.n();
    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidIndexSet(format!(
            "index {} out of range for n = {}",
            bad, n
        )));
    }
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidIndexSet(format!("{:?} is not strictly increasing", s)));
    }
    Ok(principal_unchecked(a, s))
}

/// `mu_m(A)` together with the first subset (lexicographically) attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct MuResult {
    pub value: f64,
    pub argmin_subset: Vec<usize>,
    pub m: usize,
}

/// Minimum over all `m x m` principal submatrices of their smallest eigenvalue.
pub fn mu(a: &HermitianMatrix, m: usize, budget: u64) -> Result<MuResult> {
    let n = a.n();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "mu order m = {} must lie in 1..={}",
            m, n
        )));
    }
    check_budget(n, m, budget)?;
    let mut best: Option<MuResult> = None;
    for s in SubsetIterator::new(n, m) {
        let value = *eigenvalues(&principal_unchecked(a, &s))?.last().unwrap();
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(MuResult {
                value,
                argmin_subset: s,
                m,
            });
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Kruskal rank with automatic dispatch: Hermitian positive semidefinite input
/// takes the principal-minor path, anything else the column-subset path.
pub fn kruskal_rank(a: &Matrix, tol_rel: f64, budget: u64) -> Result<usize> {
    if a.is_square() && a.hermitian_defect() <= scaled_tol(SYMMETRY_TOL, a.max_abs()) {
        let h = HermitianMatrix::hermitian_part(a);
        if classify_psd(&h, tol_rel)?.is_psd() {
            return kruskal_rank_psd(&h, tol_rel, budget);
        }
    }
    kruskal_rank_columns(a, tol_rel, budget)
}

/// Largest `q` such that every `q` columns are linearly independent.
///
/// A column subset counts as independent when its Gram matrix has numeric
/// rank `q`, i.e. `lambda_min > tol_rel * max(1, lambda_max)` on the Gram
/// (squared singular value) scale. Returns 0 when some column vanishes.
pub fn kruskal_rank_columns(a: &Matrix, tol_rel: f64, budget: u64) -> Result<usize> {
    let limit = a.rows().min(a.cols());
    search_upward(a.cols(), limit, budget, |s| {
        let g = HermitianMatrix::hermitian_part(&a.select_columns(s).gram());
        Ok(rank_of_spectrum(&eigenvalues(&g)?, tol_rel) == s.len())
    })
}

/// Largest `q` such that every `q x q` principal submatrix is positive definite.
pub fn kruskal_rank_psd(a: &HermitianMatrix, tol_rel: f64, budget: u64) -> Result<usize> {
    search_upward(a.n(), a.n(), budget, |s| {
        Ok(classify_spectrum(&eigenvalues(&principal_unchecked(a, s))?, tol_rel).is_pd())
    })
}

fn search_upward(
    n: usize,
    limit: usize,
    budget: u64,
    mut passes: impl FnMut(&[usize]) -> Result<bool>,
) -> Result<usize> {
    for q in 1..=limit {
        check_budget(n, q, budget)?;
        for s in SubsetIterator::new(n, q) {
            if !passes(&s)? {
                return Ok(q - 1);
            }
        }
    }
    Ok(limit)
}

/// `lambda_1(B) / lambda_r(B)` with `r` the numeric rank.
pub fn kappa_eff(b: &HermitianMatrix, tol_rel: f64) -> Result<f64> {
    let ev = eigenvalues(b)?;
    let class = classify_spectrum(&ev, tol_rel);
    if !class.is_psd() {
        return Err(Error::NotPositiveSemidefinite {
            which: "B".into(),
            lambda_min: class.witness,
        });
    }
    let r = rank_of_spectrum(&ev, tol_rel);
    if r == 0 {
        return Err(Error::ZeroMatrix("B".into()));
    }
    Ok(ev[0] / ev[r - 1])
}

/// Minimum over all `m`-column submatrices `V[:, S]` of their `m`-th largest
/// singular value.
///
/// Singular values come from the `m x m` Gram matrix; squared values at or
/// below `tol_rel * max(1, lambda_max)` are reported as exactly 0, and `m`
/// greater than the row count gives 0 without enumeration.
pub fn tilde_sigma(v: &Matrix, m: usize, tol_rel: f64, budget: u64) -> Result<f64> {
    let k = v.cols();
    if m == 0 || m > k {
        return Err(Error::InvalidArgument(format!(
            "tilde_sigma order m = {} must lie in 1..={}",
            m, k
        )));
    }
    if m > v.rows() {
        return Ok(0.0);
    }
    check_budget(k, m, budget)?;
    let mut best = f64::INFINITY;
    for s in SubsetIterator::new(k, m) {
        let g = HermitianMatrix::hermitian_part(&v.select_columns(&s).gram());
        let ev = eigenvalues(&g)?;
        let smallest = ev[m - 1];
        let sq = if smallest <= scaled_tol(tol_rel, ev[0]) {
            0.0
        } else {
            smallest
        };
        best = best.min(sq.sqrt());
    }
    Ok(best)
}
