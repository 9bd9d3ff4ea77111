//! Spatial smoothing for direction-of-arrival estimation with a uniform
//! linear array.
//!
//! Averaging the covariances of `P` overlapping subarrays replaces the source
//! covariance `Σ_s` with `Σ̃_s = Σ_p D^{p-1} Σ_s D^{1-p}`, which factors as
//! `Σ_s ∘ conj(V_P^* V_P)` for the `P x K` steering matrix `V_P`. The
//! quantitative Hadamard bound then gives a floor on `lambda_min(Σ̃_s)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{classify_psd, eigenvalues, rank_numeric, HermitianMatrix, Matrix, C64};
use crate::submatrix::{kappa_eff, kruskal_rank_psd, tilde_sigma};
use crate::{scaled_tol, Settings};

/// Minimum separation between distinct spatial frequencies.
pub const MIN_FREQUENCY_GAP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DoaScenario {
    /// Sensor count `N`.
    pub n_sensors: usize,
    /// Subarray parameter `P`; subarrays have `N - P + 1` sensors.
    pub subarrays: usize,
    /// Spatial frequencies `omega_k = pi sin(theta_k)` in `[-pi, pi)`.
    pub omega: Vec<f64>,
    /// `K x K` source covariance.
    pub sigma_s: HermitianMatrix,
}

impl DoaScenario {
    pub fn new(n_sensors: usize, subarrays: usize, omega: Vec<f64>, sigma_s: HermitianMatrix) -> Result<Self> {
        let k = omega.len();
        if k == 0 {
            return Err(Error::InvalidScenario("no sources".into()));
        }
        if k >= n_sensors {
            return Err(Error::InvalidScenario(format!(
                "need K < N, got K = {}, N = {}",
                k, n_sensors
            )));
        }
        if subarrays == 0 || subarrays > n_sensors {
            return Err(Error::InvalidScenario(format!(
                "P = {} must lie in 1..={}",
                subarrays, n_sensors
            )));
        }
        if let Some(w) = omega.iter().find(|w| !(-PI..PI).contains(*w)) {
            return Err(Error::InvalidScenario(format!("omega = {} outside [-pi, pi)", w)));
        }
        for i in 0..k {
            for j in i + 1..k {
                if (omega[i] - omega[j]).abs() <= MIN_FREQUENCY_GAP {
                    return Err(Error::InvalidScenario(format!(
                        "omega[{}] and omega[{}] are not distinct",
                        i, j
                    )));
                }
            }
        }
        if sigma_s.n() != k {
            return Err(Error::InvalidScenario(format!(
                "Sigma_s is {}x{}, expected {}x{}",
                sigma_s.n(),
                sigma_s.n(),
                k,
                k
            )));
        }
        let class = classify_psd(&sigma_s, crate::DEFAULT_TOL)?;
        if !class.is_psd() {
            return Err(Error::NotPositiveSemidefinite {
                which: "Sigma_s".into(),
                lambda_min: class.witness,
            });
        }
        Ok(DoaScenario {
            n_sensors,
            subarrays,
            omega,
            sigma_s,
        })
    }

    pub fn sources(&self) -> usize {
        self.omega.len()
    }
}

/// `N x K` Vandermonde steering matrix with entries `exp(i (row) omega_k)`, rows from 0.
pub fn build_steering(n: usize, omega: &[f64]) -> Matrix {
    Matrix::from_fn(n, omega.len(), |i, k| C64::from_polar(1.0, i as f64 * omega[k]))
}

/// `Σ_{p=1}^{P} D^{p-1} Σ_s D^{1-p}` with `D = diag(exp(i omega_k))`.
pub fn smoothed_cov_direct(s: &DoaScenario) -> HermitianMatrix {
    let k = s.sources();
    let mut acc = Matrix::zeros(k, k);
    for p in 0..s.subarrays {
        let d: Vec<C64> = s.omega.iter().map(|&w| C64::from_polar(1.0, p as f64 * w)).collect();
        let left = Matrix::from_fn(k, k, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) });
        let right = left.adjoint();
        let term = left
            .matmul(s.sigma_s.as_matrix())
            .and_then(|m| m.matmul(&right))
            .expect("square K x K");
        acc = acc.add(&term).expect("same shape");
    }
    HermitianMatrix::hermitian_part(&acc)
}

/// `Σ_s ∘ conj(V_P^* V_P)`.
pub fn smoothed_cov_hadamard(s: &DoaScenario) -> HermitianMatrix {
    let v = build_steering(s.subarrays, &s.omega);
    let gram = HermitianMatrix::hermitian_part(&v.gram()).conj();
    s.sigma_s.hadamard(&gram).expect("both K x K")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoaReport {
    pub n_sensors: usize,
    pub subarrays: usize,
    pub sources: usize,
    pub r_sigma_s: usize,
    /// `K - r + 1`
    pub m: usize,
    pub tilde_sigma_sq: f64,
    pub kappa_eff: f64,
    pub min_diag: f64,
    pub bound: f64,
    pub lambda_min_smoothed: f64,
    pub bound_holds: bool,
    /// `P >= K - r + 1`
    pub positivity_predicted: bool,
}

/// Floor `tilde_sigma_{K-r+1}(V_P)^2 min_i [Σ_s]_ii / kappa_eff(Σ_s)` on `lambda_min(Σ̃_s)`.
pub fn doa_bound(s: &DoaScenario, settings: &Settings) -> Result<DoaReport> {
    let tol = settings.tol;
    let k = s.sources();
    let r = rank_numeric(&s.sigma_s, tol)?;
    if r == 0 {
        return Err(Error::ZeroMatrix("Sigma_s".into()));
    }
    let m = k - r + 1;
    let v = build_steering(s.subarrays, &s.omega);
    let ts = tilde_sigma(&v, m, tol, settings.budget)?;
    let kappa = kappa_eff(&s.sigma_s, tol)?;
    let min_diag = s.sigma_s.min_diagonal();
    let tilde_sigma_sq = ts * ts;
    let bound = tilde_sigma_sq * min_diag / kappa;
    let smoothed = eigenvalues(&smoothed_cov_direct(s))?;
    let lambda_min_smoothed = *smoothed.last().unwrap();
    Ok(DoaReport {
        n_sensors: s.n_sensors,
        subarrays: s.subarrays,
        sources: k,
        r_sigma_s: r,
        m,
        tilde_sigma_sq,
        kappa_eff: kappa,
        min_diag,
        bound,
        lambda_min_smoothed,
        bound_holds: bound <= lambda_min_smoothed + scaled_tol(tol, smoothed[0]),
        positivity_predicted: s.subarrays >= m,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankIdentity {
    pub rank: usize,
    pub kruskal_rank: usize,
    pub expected: usize,
    pub holds: bool,
}

/// Rank and Kruskal rank of `V_P^* V_P` against `min{P, K}`.
pub fn rank_identity_check(s: &DoaScenario, settings: &Settings) -> Result<RankIdentity> {
    let v = build_steering(s.subarrays, &s.omega);
    let gram = HermitianMatrix::hermitian_part(&v.gram());
    let rank = rank_numeric(&gram, settings.tol)?;
    let kruskal_rank = kruskal_rank_psd(&gram, settings.tol, settings.budget)?;
    let expected = s.subarrays.min(s.sources());
    Ok(RankIdentity {
        rank,
        kruskal_rank,
        expected,
        holds: rank == expected && kruskal_rank == expected,
    })
}
