//! Spectral floor for the matrix CP-factor model `Y_t = A X_t B^* + e_t`.
//!
//! With lag-covariance weights `g_k` the row-side matrix is
//! `M_1 = A (Σ_k G_k B^*B G_k) A^* = A (G ∘ B^*B) A^*`, `G = Σ_k g_k g_k^*`.
//! Because `B^*B` has a unit diagonal the quantitative Hadamard bound gives
//! `lambda_min(G ∘ B^*B) >= mu_{d-d_2+1}(G) / kappa_eff(B^*B)`, and
//! `lambda_min^+(M_1) >= sigma_{d_1}(A)^2` times that.

use serde::Serialize;

use crate::certify::nonsingularity_predicate;
use crate::error::{Error, Result};
use crate::matcore::{eigenvalues, lambda_min_positive, rank_numeric, rank_of_spectrum, HermitianMatrix, Matrix, C64};
use crate::submatrix::{kappa_eff, kruskal_rank_psd, mu};
use crate::{scaled_tol, Settings};

/// Allowed deviation of a loading column norm from 1.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// Agreement required between the lag and factored forms of `M_1`.
pub const M1_AGREEMENT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct CpScenario {
    /// `p x d` row loadings.
    pub a_load: Matrix,
    /// `q x d` column loadings.
    pub b_load: Matrix,
    /// Lag weights `g_1, .., g_K`, each of length `d`.
    pub g: Vec<Vec<f64>>,
}

impl CpScenario {
    pub fn new(a_load: Matrix, b_load: Matrix, g: Vec<Vec<f64>>) -> Result<Self> {
        let d = a_load.cols();
        if d == 0 {
            return Err(Error::InvalidScenario("latent dimension d must be positive".into()));
        }
        if b_load.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "A has {} columns, B has {}",
                d,
                b_load.cols()
            )));
        }
        if g.is_empty() {
            return Err(Error::InvalidScenario("need at least one lag vector".into()));
        }
        if let Some((k, gk)) = g.iter().enumerate().find(|(_, gk)| gk.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "g[{}] has length {}, expected {}",
                k,
                gk.len(),
                d
            )));
        }
        for (name, m) in [("A", &a_load), ("B", &b_load)] {
            for j in 0..d {
                let norm = m.column_norm(j);
                if (norm - 1.0).abs() > UNIT_NORM_TOL {
                    return Err(Error::InvalidScenario(format!(
                        "column {} of {} has norm {}",
                        j, name, norm
                    )));
                }
            }
        }
        Ok(CpScenario { a_load, b_load, g })
    }

    pub fn d(&self) -> usize {
        self.a_load.cols()
    }

    /// `G = Σ_k g_k g_k^*`.
    pub fn g_matrix(&self) -> HermitianMatrix {
        let d = self.d();
        let mut m = Matrix::zeros(d, d);
        for gk in &self.g {
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += C64::new(gk[i] * gk[j], 0.0);
                }
            }
        }
        HermitianMatrix::hermitian_part(&m)
    }

    pub fn btb(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(&self.b_load.gram())
    }
}

#[derive(Clone, Debug)]
pub struct CpM1 {
    /// `G ∘ B^*B`
    pub core: HermitianMatrix,
    /// `A (Σ_k G_k B^*B G_k) A^*`
    pub lag_form: HermitianMatrix,
    /// `A (G ∘ B^*B) A^*`
    pub factored_form: HermitianMatrix,
    pub max_difference: f64,
}

fn sandwich(a: &Matrix, core: &Matrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::hermitian_part(&a.matmul(core)?.matmul(&a.adjoint())?))
}

/// `M_1` by both routes; errors if they disagree beyond `1e-10 * max(1, max|M_1|)`.
pub fn cp_m1(s: &CpScenario) -> Result<CpM1> {
    let d = s.d();
    let btb = s.btb();
    let mut lag_core = Matrix::zeros(d, d);
    for gk in &s.g {
        let gd = Matrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(gk[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        lag_core = lag_core.add(&gd.matmul(btb.as_matrix())?.matmul(&gd)?)?;
    }
    let core = s.g_matrix().hadamard(&btb)?;
    let lag_form = sandwich(&s.a_load, &lag_core)?;
    let factored_form = sandwich(&s.a_load, core.as_matrix())?;
    let max_difference = lag_form.max_abs_diff(&factored_form)?;
    let tol = scaled_tol(M1_AGREEMENT_TOL, factored_form.max_abs());
    if max_difference > tol {
        return Err(Error::InvariantViolated {
            name: "lag form = factored form of M_1".into(),
            residual: max_difference,
            tol,
        });
    }
    Ok(CpM1 {
        core,
        lag_form,
        factored_form,
        max_difference,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CpReport {
    pub d: usize,
    /// `rank A`
    pub d1: usize,
    /// `rank B^*B`
    pub d2: usize,
    pub kruskal_g: usize,
    pub rank_g: usize,
    /// `k_G >= d - d_2 + 1`
    pub condition_met: bool,
    /// `k_G + d_2 > d` or `r_G + k_{B^*B} > d`
    pub relaxed_condition_met: bool,
    pub mu_order: usize,
    pub mu_g: f64,
    pub kappa_eff_btb: f64,
    pub sigma_d1_sq: f64,
    pub hadamard_floor: f64,
    pub m1_floor: f64,
    pub lambda_min_core: f64,
    pub rank_m1: usize,
    pub lambda_min_pos_m1: Option<f64>,
    pub core_floor_holds: bool,
    pub m1_floor_holds: bool,
    pub m1_form_difference: f64,
}

pub fn cp_bound(s: &CpScenario, settings: &Settings) -> Result<CpReport> {
    let tol = settings.tol;
    let d = s.d();
    let g = s.g_matrix();
    let btb = s.btb();
    let d2 = rank_numeric(&btb, tol)?;
    if rank_numeric(&g, tol)? == 0 {
        return Err(Error::ZeroMatrix("G".into()));
    }
    let ata = eigenvalues(&HermitianMatrix::hermitian_part(&s.a_load.gram()))?;
    let d1 = rank_of_spectrum(&ata, tol);
    let sigma_d1_sq = if d1 == 0 { 0.0 } else { ata[d1 - 1] };

    let mu_order = d - d2 + 1;
    let mu_g = mu(&g, mu_order, settings.budget)?.value;
    let kappa = kappa_eff(&btb, tol)?;
    let hadamard_floor = mu_g / kappa;
    let m1_floor = sigma_d1_sq * hadamard_floor;

    let m1 = cp_m1(s)?;
    let core_ev = eigenvalues(&m1.core)?;
    let lambda_min_core = *core_ev.last().unwrap();
    let m1_ev = eigenvalues(&m1.factored_form)?;
    let lambda_min_pos_m1 = lambda_min_positive(&m1_ev, tol);

    let kruskal_g = kruskal_rank_psd(&g, tol, settings.budget)?;
    let forward = nonsingularity_predicate(&g, &btb, settings)?.holds;
    let backward = nonsingularity_predicate(&btb, &g, settings)?.holds;

    let core_tol = scaled_tol(tol, core_ev[0]);
    let m1_tol = scaled_tol(tol, m1_ev.first().copied().unwrap_or(0.0));
    Ok(CpReport {
        d,
        d1,
        d2,
        kruskal_g,
        rank_g: rank_numeric(&g, tol)?,
        condition_met: kruskal_g >= mu_order,
        relaxed_condition_met: forward || backward,
        mu_order,
        mu_g,
        kappa_eff_btb: kappa,
        sigma_d1_sq,
        hadamard_floor,
        m1_floor,
        lambda_min_core,
        rank_m1: rank_of_spectrum(&m1_ev, tol),
        lambda_min_pos_m1,
        core_floor_holds: lambda_min_core >= hadamard_floor - core_tol,
        m1_floor_holds: match lambda_min_pos_m1 {
            Some(v) => v >= m1_floor - m1_tol,
            None => m1_floor <= m1_tol,
        },
        m1_form_difference: m1.max_difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    fn unit(rows: &[Vec<f64>]) -> Matrix {
        let m = Matrix::from_real_rows(rows).unwrap();
        let norms: Vec<f64> = (0..m.cols()).map(|j| m.column_norm(j)).collect();
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] / norms[j])
    }

    #[test]
    fn single_lag_identity() {
        let a = unit(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        let b = unit(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        let s = CpScenario::new(a, b, vec![vec![0.7, -1.3]]).unwrap();
        let m1 = cp_m1(&s).unwrap();
        let g = &s.g[0];
        let btb = s.btb();
        let expect = Matrix::from_fn(2, 2, |i, j| btb[(i, j)] * (g[i] * g[j]));
        assert!(m1.core.max_abs_diff(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn scalar_latent() {
        let a = unit(&[vec![3.0], vec![4.0]]);
        let b = unit(&[vec![1.0], vec![1.0], vec![1.0]]);
        let s = CpScenario::new(a.clone(), b, vec![vec![2.0], vec![-1.0]]).unwrap();
        let m1 = cp_m1(&s).unwrap();
        let expect = a.matmul(&a.adjoint()).unwrap().scale(5.0);
        assert!(m1.factored_form.max_abs_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn orthonormal_b_floor_is_min_diag_of_g() {
        let a = unit(&[
            vec![1.0, 2.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 3.0],
            vec![2.0, 1.0, 1.0],
        ]);
        let b = Matrix::identity(3);
        let g = vec![vec![1.0, 0.5, -0.2], vec![0.3, -1.0, 0.8]];
        let s = CpScenario::new(a, b, g.clone()).unwrap();
        let r = cp_bound(&s, &Settings::default()).unwrap();
        assert!((r.kappa_eff_btb - 1.0).abs() < 1e-14);
        let min_g = (0..3)
            .map(|k| g.iter().map(|gj| gj[k] * gj[k]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!((r.hadamard_floor - min_g).abs() < 1e-14);
        assert!(r.core_floor_holds && r.m1_floor_holds);
    }

    #[test]
    fn rank_one_b_with_full_kruskal_g() {
        // d = 2, d2 = 1: need k_G = 2.
        let a = unit(&[vec![1.0, 0.2], vec![0.3, 1.0]]);
        let b = unit(&[vec![1.0, 1.0], vec![2.0, 2.0]]);
        let s = CpScenario::new(a, b, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = cp_bound(&s, &Settings::default()).unwrap();
        assert_eq!((r.d2, r.kruskal_g, r.mu_order), (1, 2, 2));
        assert!(r.condition_met && r.hadamard_floor > 0.0);
        assert!(r.core_floor_holds && r.m1_floor_holds);
    }

    #[test]
    fn random_rank_deficient() {
        let mut rng = testgen::rng(21);
        for _ in 0..20 {
            let s = testgen::random_cp_scenario(&mut rng, 4, 3, 3, 3, 3, 2);
            let r = cp_bound(&s, &Settings::default()).unwrap();
            assert_eq!(r.d2, 2);
            if r.condition_met {
                assert!(r.core_floor_holds && r.m1_floor_holds, "{:?}", r);
                assert_eq!(r.rank_m1, r.d1);
            }
        }
    }

    #[test]
    fn invalid() {
        let a = unit(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(CpScenario::new(
            a.clone(),
            Matrix::from_real_rows(&[vec![1.0, 2.0]]).unwrap(),
            vec![vec![1.0, 1.0]]
        )
        .is_err());
        assert!(CpScenario::new(a.clone(), a.clone(), vec![]).is_err());
        assert!(CpScenario::new(a.clone(), a.clone(), vec![vec![1.0]]).is_err());
        assert!(CpScenario::new(a.clone(), unit(&[vec![1.0]]), vec![vec![1.0, 1.0]]).is_err());
        let s = CpScenario::new(a.clone(), a, vec![vec![0.0, 0.0]]).unwrap();
        assert!(matches!(cp_bound(&s, &Settings::default()), Err(Error::ZeroMatrix(_))));
    }
}
