//! Lower bounds and positivity certificates for Hadamard products.
//!
//! For PSD `A, B` with `r = rank B >= 1` the quantitative bound is the Löwner
//! inequality `A ∘ B >= (mu_{n-r+1}(A) / kappa_eff(B)) (I ∘ B)`, whence
//! `lambda_min(A ∘ B) >= mu_{n-r+1}(A) min_i b_ii / kappa_eff(B)`. The
//! certificates report hypothesis and conclusion separately so that "the
//! sufficient condition is not met" is never confused with "the product is
//! not positive semidefinite".

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{
    classify_psd, classify_spectrum, eigenvalues, is_orthogonal_projection, rank_numeric, trace_rank, HermitianMatrix,
    Matrix, C64,
};
use crate::submatrix::{kappa_eff, kruskal_rank_psd, mu};
use crate::{scaled_tol, Settings};

fn require_psd(m: &HermitianMatrix, which: &str, tol: f64) -> Result<()> {
    let class = classify_psd(m, tol)?;
    if !class.is_psd() {
        return Err(Error::NotPositiveSemidefinite {
            which: which.into(),
            lambda_min: class.witness,
        });
    }
    Ok(())
}

fn require_same_n(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.n(),
            a.n(),
            b.n(),
            b.n()
        )));
    }
    Ok(())
}

/// `lambda_min(A) * min_i b_ii`.
pub fn classical_bound(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<f64> {
    require_same_n(a, b)?;
    let ev = eigenvalues(a)?;
    let class = classify_spectrum(&ev, tol);
    if !class.is_psd() {
        return Err(Error::NotPositiveSemidefinite {
            which: "A".into(),
            lambda_min: class.witness,
        });
    }
    require_psd(b, "B", tol)?;
    Ok(class.witness * b.min_diagonal())
}

/// Every ingredient of the quantitative bound, plus the verification outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub r_b: usize,
    /// Order `n - r_b + 1` of the principal submatrices entering `mu`.
    pub mu_order: usize,
    pub mu: f64,
    pub mu_argmin: Vec<usize>,
    pub kappa_eff: f64,
    pub min_diag: f64,
    pub lambda_min_a: f64,
    pub classical_bound: f64,
    pub quantitative_bound: f64,
    pub actual_lambda_min: f64,
    pub loewner_verified: bool,
    pub margin: f64,
}

impl BoundReport {
    /// Löwner form verified and `lambda_min(A ∘ B)` not below the bound beyond `tol`.
    pub fn verified(&self, tol: f64) -> bool {
        self.loewner_verified && self.margin >= -scaled_tol(tol, self.actual_lambda_min.abs())
    }
}

pub fn quantitative_bound(a: &HermitianMatrix, b: &HermitianMatrix, settings: &Settings) -> Result<BoundReport> {
    require_same_n(a, b)?;
    let tol = settings.tol;
    let ev_a = eigenvalues(a)?;
    let class_a = classify_spectrum(&ev_a, tol);
    if !class_a.is_psd() {
        return Err(Error::NotPositiveSemidefinite {
            which: "A".into(),
            lambda_min: class_a.witness,
        });
    }
    require_psd(b, "B", tol)?;
    let n = a.n();
    let r_b = rank_numeric(b, tol)?;
    if r_b == 0 {
        return Err(Error::ZeroMatrix("B".into()));
    }
    let mu_order = n - r_b + 1;
    let mu_res = mu(a, mu_order, settings.budget)?;
    let kappa = kappa_eff(b, tol)?;
    let min_diag = b.min_diagonal();
    let lambda_min_a = class_a.witness;

    let product = a.hadamard(b)?;
    let actual = *eigenvalues(&product)?.last().unwrap();
    let quantitative = mu_res.value * min_diag / kappa;
    let loewner_verified = loewner_check(&product, mu_res.value / kappa, &b.diagonal_part(), tol)?;

    Ok(BoundReport {
        n,
        r_b,
        mu_order,
        mu: mu_res.value,
        mu_argmin: mu_res.argmin_subset,
        kappa_eff: kappa,
        min_diag,
        lambda_min_a,
        classical_bound: lambda_min_a * min_diag,
        quantitative_bound: quantitative,
        actual_lambda_min: actual,
        loewner_verified,
        margin: actual - quantitative,
    })
}

/// `M - c D >= 0` within `tol * max(1, lambda_1(M - c D))`.
pub fn loewner_check(m: &HermitianMatrix, c: f64, d: &HermitianMatrix, tol: f64) -> Result<bool> {
    let diff = m.sub(&d.scale(c))?;
    Ok(classify_psd(&diff, tol)?.is_psd())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonsingularityVerdict {
    pub holds: bool,
    pub n: usize,
    pub kruskal_a: usize,
    pub rank_b: usize,
    pub required_kruskal: usize,
    pub min_diag_b: f64,
    pub explanation: String,
}

/// Sufficient condition for `A ∘ B` positive definite: `B` has no zero
/// diagonal entry and `k_A >= n - r_B + 1`. `false` means only that the
/// condition is not met.
pub fn nonsingularity_predicate(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    settings: &Settings,
) -> Result<NonsingularityVerdict> {
    require_same_n(a, b)?;
    let tol = settings.tol;
    let n = a.n();
    let kruskal_a = kruskal_rank_psd(a, tol, settings.budget)?;
    let rank_b = rank_numeric(b, tol)?;
    let min_diag_b = b.min_diagonal();
    let required = (n + 1).saturating_sub(rank_b);
    let diag_ok = min_diag_b > scaled_tol(tol, b.max_abs());
    let kruskal_ok = kruskal_a >= required;
    let explanation = if !diag_ok {
        format!("B has a zero diagonal entry (min b_ii = {:e})", min_diag_b)
    } else if kruskal_ok {
        format!(
            "k_A + r_B = {} + {} = {} > n = {}",
            kruskal_a,
            rank_b,
            kruskal_a + rank_b,
            n
        )
    } else {
        format!(
            "k_A + r_B = {} + {} = {} <= n = {}; condition not met",
            kruskal_a,
            rank_b,
            kruskal_a + rank_b,
            n
        )
    };
    Ok(NonsingularityVerdict {
        holds: diag_ok && kruskal_ok,
        n,
        kruskal_a,
        rank_b,
        required_kruskal: required,
        min_diag_b,
        explanation,
    })
}

/// Which case of the bordered-projection structure applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CornerBranch {
    /// `p = 0`: `x = 0`, `P_1` has rank `r`.
    Zero,
    /// `p = 1`: `x = 0`, `P_1` has rank `r - 1`.
    One,
    /// `0 < p < 1`: `Q` and `R` are defined.
    Interior,
}

/// Residuals of the structural identities; unused entries are 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BorderedResiduals {
    /// `| |x|^2 - p(1-p) |`
    pub norm_identity: f64,
    /// `max |P_1^2 - P_1|` in the boundary branches.
    pub p1_idempotency: f64,
    pub q_idempotency: f64,
    /// `max |Q x|`
    pub qx: f64,
    pub q_trace: f64,
    pub r_idempotency: f64,
    pub r_trace: f64,
}

impl BorderedResiduals {
    pub fn max(&self) -> f64 {
        [
            self.norm_identity,
            self.p1_idempotency,
            self.q_idempotency,
            self.qx,
            self.q_trace,
            self.r_idempotency,
            self.r_trace,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `P = [[P_1, x], [x^*, p]]` with `Q = P_1 - x x^* / p` and
/// `R = Q + x x^* / |x|^2` when `0 < p < 1`.
#[derive(Clone, Debug)]
pub struct ProjectionParts {
    pub rank: usize,
    pub p1: HermitianMatrix,
    pub x: Vec<C64>,
    pub p: f64,
    pub branch: CornerBranch,
    /// Rank of `P_1` (boundary branches) or of `Q` (interior).
    pub inner_rank: usize,
    pub q: Option<HermitianMatrix>,
    pub r: Option<HermitianMatrix>,
    pub residuals: BorderedResiduals,
}

fn outer(x: &[C64]) -> Matrix {
    Matrix::from_fn(x.len(), x.len(), |i, j| x[i] * x[j].conj())
}

fn idempotency_defect(m: &Matrix) -> f64 {
    m.matmul(m).and_then(|m2| m2.max_abs_diff(m)).unwrap_or(f64::INFINITY)
}

fn check(name: &str, residual: f64, tol: f64) -> Result<()> {
    if residual > tol || residual.is_nan() {
        return Err(Error::InvariantViolated {
            name: name.into(),
            residual,
            tol,
        });
    }
    Ok(())
}

/// Split a projection along its last row/column and verify every structural
/// identity within absolute tolerance `tol`.
pub fn decompose_projection(proj: &HermitianMatrix, tol: f64) -> Result<ProjectionParts> {
    let n = proj.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "bordered decomposition needs n >= 2, got {}",
            n
        )));
    }
    let test = is_orthogonal_projection(proj, tol)?;
    let rank = match test.rank {
        Some(r) if test.is_projection => r,
        _ => {
            return Err(Error::NotProjection(format!(
                "Hermitian/idempotency defect above {:e}",
                tol
            )))
        }
    };

    let m = n - 1;
    let p1 = HermitianMatrix::hermitian_part(&Matrix::from_fn(m, m, |i, j| proj[(i, j)]));
    let x: Vec<C64> = (0..m).map(|i| proj[(i, m)]).collect();
    let p = proj[(m, m)].re;
    let x_norm_sq: f64 = x.iter().map(|z| z.norm_sqr()).sum();

    let mut residuals = BorderedResiduals {
        norm_identity: (x_norm_sq - p * (1.0 - p)).abs(),
        ..Default::default()
    };
    check("|x|^2 = p(1-p)", residuals.norm_identity, tol)?;
    if p < -tol || p > 1.0 + tol {
        return Err(Error::InvariantViolated {
            name: "0 <= p <= 1".into(),
            residual: if p < 0.0 { -p } else { p - 1.0 },
            tol,
        });
    }

    if p <= tol || p >= 1.0 - tol {
        let (branch, corner) = if p <= tol {
            (CornerBranch::Zero, 0)
        } else {
            (CornerBranch::One, 1)
        };
        check("x = 0", x_norm_sq, tol)?;
        residuals.p1_idempotency = idempotency_defect(&p1);
        check("P_1 idempotent", residuals.p1_idempotency, tol)?;
        let inner_rank = trace_rank(p1.trace().re)?;
        if inner_rank + corner != rank {
            return Err(Error::InvariantViolated {
                name: "rank P_1 = r - p".into(),
                residual: (inner_rank as f64 + corner as f64 - rank as f64).abs(),
                tol,
            });
        }
        return Ok(ProjectionParts {
            rank,
            p1,
            x,
            p,
            branch,
            inner_rank,
            q: None,
            r: None,
            residuals,
        });
    }

    let xx = outer(&x);
    let q = HermitianMatrix::hermitian_part(&p1.as_matrix().sub(&xx.scale(1.0 / p))?);
    let r = HermitianMatrix::hermitian_part(&q.as_matrix().add(&xx.scale(1.0 / x_norm_sq))?);

    let qx = q.matmul(&Matrix::column_vector(&x))?;
    residuals.q_idempotency = idempotency_defect(&q);
    residuals.qx = qx.max_abs();
    residuals.q_trace = (q.trace().re - (rank as f64 - 1.0)).abs();
    residuals.r_idempotency = idempotency_defect(&r);
    residuals.r_trace = (r.trace().re - rank as f64).abs();
    check("Q idempotent", residuals.q_idempotency, tol)?;
    check("Q x = 0", residuals.qx, tol)?;
    check("trace Q = r - 1", residuals.q_trace, tol)?;
    check("R idempotent", residuals.r_idempotency, tol)?;
    check("trace R = r", residuals.r_trace, tol)?;

    Ok(ProjectionParts {
        rank,
        p1,
        x,
        p,
        branch: CornerBranch::Interior,
        inner_rank: rank - 1,
        q: Some(q),
        r: Some(r),
        residuals,
    })
}

/// Outcome of the projection-factor certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionVerdict {
    pub n: usize,
    pub rank: usize,
    /// `n - r + 1`
    pub order: usize,
    pub mu: f64,
    pub lambda_min_c: f64,
    pub lambda_min_product: f64,
    pub product_eigenvalues: Vec<f64>,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
}

impl ProjectionVerdict {
    pub fn certified(&self) -> bool {
        self.hypothesis_holds && self.conclusion_holds
    }
}

/// If every principal submatrix of `C` of order `n - r + 1` is PSD then
/// `C ∘ P >= 0` for a rank-`r` projection `P`. A hypothesis that holds with a
/// failing conclusion is returned as [`Error::Inconsistent`].
pub fn projection_certificate(
    c: &HermitianMatrix,
    proj: &HermitianMatrix,
    settings: &Settings,
) -> Result<ProjectionVerdict> {
    require_same_n(c, proj)?;
    let tol = settings.tol;
    let n = c.n();
    let test = is_orthogonal_projection(proj, tol)?;
    let rank = match test.rank {
        Some(r) if test.is_projection && r >= 1 => r,
        Some(_) if test.is_projection => {
            return Err(Error::NotProjection("rank-0 projection has no certificate".into()));
        }
        _ => {
            return Err(Error::NotProjection(format!(
                "Hermitian/idempotency defect above {:e}",
                tol
            )))
        }
    };
    let order = n - rank + 1;
    let mu_res = mu(c, order, settings.budget)?;
    let hypothesis_holds = mu_res.value >= -scaled_tol(tol, c.max_abs());

    let product_eigenvalues = eigenvalues(&c.hadamard(proj)?)?;
    let conclusion = classify_spectrum(&product_eigenvalues, tol);
    let conclusion_holds = conclusion.is_psd();
    if hypothesis_holds && !conclusion_holds {
        return Err(Error::Inconsistent {
            lambda_min: conclusion.witness,
        });
    }
    Ok(ProjectionVerdict {
        n,
        rank,
        order,
        mu: mu_res.value,
        lambda_min_c: *eigenvalues(c)?.last().unwrap(),
        lambda_min_product: conclusion.witness,
        product_eigenvalues,
        hypothesis_holds,
        conclusion_holds,
    })
}

/// Outcome of the indefinite-factor certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndefiniteVerdict {
    pub n: usize,
    pub rank_b: usize,
    pub order: usize,
    pub mu: f64,
    pub kappa_eff: f64,
    pub lambda_min_c: f64,
    /// `-(kappa_eff(B) - 1) lambda_min(C)`
    pub required_mu: f64,
    pub lambda_min_product: f64,
    pub c_indefinite: bool,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
}

impl IndefiniteVerdict {
    pub fn certified(&self) -> bool {
        self.hypothesis_holds && self.conclusion_holds
    }
}

/// `mu_{n-r+1}(C) >= -(kappa_eff(B) - 1) lambda_min(C)` implies `C ∘ B >= 0`
/// for Hermitian `C` and PSD `B` of rank `r >= 1`.
pub fn indefinite_certificate(
    c: &HermitianMatrix,
    b: &HermitianMatrix,
    settings: &Settings,
) -> Result<IndefiniteVerdict> {
    require_same_n(c, b)?;
    let tol = settings.tol;
    let n = c.n();
    let kappa = kappa_eff(b, tol)?;
    let rank_b = rank_numeric(b, tol)?;
    let order = n - rank_b + 1;
    let mu_res = mu(c, order, settings.budget)?;
    let ev_c = eigenvalues(c)?;
    let class_c = classify_spectrum(&ev_c, tol);
    let lambda_min_c = class_c.witness;
    let required_mu = -(kappa - 1.0) * lambda_min_c;
    let hypothesis_holds = mu_res.value >= required_mu - scaled_tol(tol, c.max_abs());

    let product = eigenvalues(&c.hadamard(b)?)?;
    let conclusion = classify_spectrum(&product, tol);
    let conclusion_holds = conclusion.is_psd();
    if hypothesis_holds && !conclusion_holds {
        return Err(Error::Inconsistent {
            lambda_min: conclusion.witness,
        });
    }
    Ok(IndefiniteVerdict {
        n,
        rank_b,
        order,
        mu: mu_res.value,
        kappa_eff: kappa,
        lambda_min_c,
        required_mu,
        lambda_min_product: conclusion.witness,
        c_indefinite: !class_c.is_psd(),
        hypothesis_holds,
        conclusion_holds,
    })
}

/// `C = A - c I` with `c = fraction * mu_{n-r_B+1}(A) / kappa_eff(B)`.
#[derive(Clone, Debug)]
pub struct ShiftedMatrix {
    pub shift: f64,
    /// `mu_{n-r_B+1}(A) / kappa_eff(B)`, the largest admissible shift.
    pub max_shift: f64,
    pub c: HermitianMatrix,
}

pub fn shift_construction(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    fraction: f64,
    settings: &Settings,
) -> Result<ShiftedMatrix> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "fraction {} must lie in (0, 1]",
            fraction
        )));
    }
    require_same_n(a, b)?;
    let tol = settings.tol;
    require_psd(a, "A", tol)?;
    let rank_b = rank_numeric(b, tol)?;
    let kappa = kappa_eff(b, tol)?;
    let mu_res = mu(a, a.n() - rank_b + 1, settings.budget)?;
    let max_shift = mu_res.value / kappa;
    if max_shift <= scaled_tol(tol, a.max_abs()) {
        return Err(Error::NoAdmissibleShift { bound: max_shift });
    }
    let shift = fraction * max_shift;
    Ok(ShiftedMatrix {
        shift,
        max_shift,
        c: a.shift(shift),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::lambda_min;
    use crate::testgen;

    fn pair_a() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![2.0, 1.0, 1.0], vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]]).unwrap()
    }

    fn pair_b() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![2.0, 1.0, 1.0], vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]]).unwrap()
    }

    fn example_c() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![8.0, 7.0, 0.0], vec![7.0, 8.0, 4.0], vec![0.0, 4.0, 8.0]]).unwrap()
    }

    fn example_p() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![2.0, -1.0, -1.0], vec![-1.0, 2.0, -1.0], vec![-1.0, -1.0, 2.0]])
            .unwrap()
            .scale(1.0 / 3.0)
    }

    #[test]
    fn classical() {
        assert!(classical_bound(&pair_a(), &pair_b(), 1e-9).unwrap().abs() < 1e-12);
        let i = HermitianMatrix::identity(3);
        assert_eq!(classical_bound(&i, &i, 1e-9).unwrap(), 1.0);
        assert!(classical_bound(&example_c(), &i, 1e-9).is_err());
    }

    #[test]
    fn quantitative_on_pair() {
        let r = quantitative_bound(&pair_a(), &pair_b(), &Settings::default()).unwrap();
        let expect = ((3.0 - 5f64.sqrt()) / 2.0) / (3.0 + 2.0 * 2f64.sqrt());
        assert!((r.quantitative_bound - expect).abs() < 1e-12);
        assert!((r.actual_lambda_min - (5.0 - 17f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(r.loewner_verified);
        assert!(r.verified(1e-9));
        assert_eq!((r.r_b, r.mu_order), (2, 2));
    }

    #[test]
    fn diagonal_equality_case() {
        let a = HermitianMatrix::from_diagonal(&[3.0, 0.5, 2.0]);
        let r = quantitative_bound(&a, &HermitianMatrix::identity(3), &Settings::default()).unwrap();
        assert_eq!(r.quantitative_bound, 0.5);
        assert_eq!(r.actual_lambda_min, 0.5);
    }

    #[test]
    fn quantitative_errors() {
        let s = Settings::default();
        assert!(matches!(
            quantitative_bound(&pair_a(), &HermitianMatrix::zeros(3), &s),
            Err(Error::ZeroMatrix(_))
        ));
        assert!(matches!(
            quantitative_bound(&example_c(), &pair_b(), &s),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        assert!(quantitative_bound(&pair_a(), &HermitianMatrix::identity(2), &s).is_err());
    }

    #[test]
    fn loewner() {
        let ab = pair_a().hadamard(&pair_b()).unwrap();
        let d = pair_b().diagonal_part();
        assert!(loewner_check(&ab, 0.0655, &d, 1e-9).unwrap());
        assert!(!loewner_check(&ab, 0.5, &d, 1e-9).unwrap());
        assert!(loewner_check(&pair_a(), 0.0, &d, 1e-9).unwrap());
        assert!(!loewner_check(&example_c(), 0.0, &HermitianMatrix::identity(3), 1e-9).unwrap());
    }

    #[test]
    fn nonsingularity_on_pair() {
        let s = Settings::default();
        let v = nonsingularity_predicate(&pair_a(), &pair_b(), &s).unwrap();
        assert!(v.holds);
        assert_eq!((v.kruskal_a, v.rank_b, v.n), (2, 2, 3));
        let v = nonsingularity_predicate(&pair_b(), &pair_a(), &s).unwrap();
        assert!(!v.holds);
        assert_eq!(v.kruskal_a + v.rank_b, 3);
        let zero_diag = HermitianMatrix::from_diagonal(&[1.0, 0.0, 2.0]);
        assert!(
            !nonsingularity_predicate(&HermitianMatrix::identity(3), &zero_diag, &s)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn decompose_example_projection() {
        let parts = decompose_projection(&example_p(), 1e-9).unwrap();
        assert_eq!(parts.branch, CornerBranch::Interior);
        assert!((parts.p - 2.0 / 3.0).abs() < 1e-15);
        let xn: f64 = parts.x.iter().map(|z| z.norm_sqr()).sum();
        assert!((xn - 2.0 / 9.0).abs() < 1e-15);
        let q = parts.q.unwrap();
        let expect_q = HermitianMatrix::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert!(q.max_abs_diff(&expect_q).unwrap() < 1e-15);
        assert!(parts.r.unwrap().max_abs_diff(&Matrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn decompose_boundary_branches() {
        let mut rng = testgen::rng(1);
        let q0 = testgen::random_projection(&mut rng, 4, 2);
        let bordered = |corner: f64| {
            HermitianMatrix::hermitian_part(&Matrix::from_fn(5, 5, |i, j| match (i < 4, j < 4) {
                (true, true) => q0[(i, j)],
                (false, false) => C64::new(corner, 0.0),
                _ => C64::new(0.0, 0.0),
            }))
        };
        let one = decompose_projection(&bordered(1.0), 1e-9).unwrap();
        assert_eq!((one.branch, one.rank, one.inner_rank), (CornerBranch::One, 3, 2));
        let zero = decompose_projection(&bordered(0.0), 1e-9).unwrap();
        assert_eq!((zero.branch, zero.rank, zero.inner_rank), (CornerBranch::Zero, 2, 2));
        assert!(zero.q.is_none());
    }

    #[test]
    fn decompose_rejects() {
        assert!(matches!(
            decompose_projection(&pair_b(), 1e-9),
            Err(Error::NotProjection(_))
        ));
        assert!(decompose_projection(&HermitianMatrix::identity(1), 1e-9).is_err());
    }

    #[test]
    fn projection_certificate_example() {
        let v = projection_certificate(&example_c(), &example_p(), &Settings::default()).unwrap();
        assert!(v.hypothesis_holds && v.conclusion_holds);
        assert_eq!((v.rank, v.order), (2, 2));
        assert!(v.lambda_min_c < 0.0);
        // C ∘ P = [[16, -7, 0], [-7, 16, -4], [0, -4, 16]] / 3.
        let r = 65f64.sqrt();
        assert!((v.product_eigenvalues[0] - (16.0 + r) / 3.0).abs() < 1e-12);
        assert!((v.product_eigenvalues[1] - 16.0 / 3.0).abs() < 1e-12);
        assert!((v.lambda_min_product - (16.0 - r) / 3.0).abs() < 1e-12);
        assert!(projection_certificate(&example_c(), &pair_b(), &Settings::default()).is_err());
    }

    #[test]
    fn indefinite_and_shift() {
        let s = Settings::default();
        let shifted = shift_construction(&pair_a(), &pair_b(), 1.0, &s).unwrap();
        assert!((shifted.shift - 0.065535).abs() < 1e-6);
        let v = indefinite_certificate(&shifted.c, &pair_b(), &s).unwrap();
        assert!(v.c_indefinite && v.certified());

        let c06 = pair_a().shift(0.06);
        let v = indefinite_certificate(&c06, &pair_b(), &s).unwrap();
        assert!(v.c_indefinite && v.certified());

        let v = indefinite_certificate(&pair_a(), &pair_b(), &s).unwrap();
        assert!(v.certified());

        let tiny = shift_construction(&pair_a(), &pair_b(), 1e-9, &s).unwrap();
        assert!(tiny.c.max_abs_diff(&pair_a()).unwrap() < 1e-9);
        assert!(indefinite_certificate(&tiny.c, &pair_b(), &s).unwrap().certified());

        assert!(shift_construction(&pair_a(), &pair_b(), 0.0, &s).is_err());
        assert!(shift_construction(&pair_a(), &pair_b(), 1.5, &s).is_err());
        // Swapped roles: mu_2(B) = 0, nothing admissible.
        assert!(matches!(
            shift_construction(&pair_b(), &pair_a(), 1.0, &s),
            Err(Error::NoAdmissibleShift { .. })
        ));
    }

    #[test]
    fn random_margins_stay_nonnegative() {
        let mut rng = testgen::rng(77);
        for _ in 0..50 {
            let a = testgen::random_psd(&mut rng, 5, 5);
            let b = testgen::random_psd(&mut rng, 5, 2);
            let r = quantitative_bound(&a, &b, &Settings::default()).unwrap();
            assert!(r.margin >= -1e-9, "margin {}", r.margin);
            assert!(r.classical_bound <= lambda_min(&a.hadamard(&b).unwrap()).unwrap() + 1e-9);
        }
    }
}
