//! JSON scenario documents.
//!
//! DOA: `{"N": 8, "K": 2, "P": 3, "omega": [-0.5, 0.7], "sigma_s": [[1, 0.8], [0.8, 0.64]]}`
//!
//! CP: `{"d": 2, "A": [[..], ..], "B": [[..], ..], "g": [[..], ..]}`
//!
//! Matrix entries are either plain numbers or `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::apps::cp::CpScenario;
use crate::apps::doa::DoaScenario;
use crate::error::{Error, Result};
use crate::matcore::{HermitianMatrix, Matrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> C64 {
        match e {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for Entry {
    fn from(z: C64) -> Entry {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

pub fn rows_to_matrix(rows: &[Vec<Entry>]) -> Result<Matrix> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&e| e.into()).collect()).collect();
    Matrix::from_rows(&rows)
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<Entry>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoaScenarioFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "P")]
    pub p: usize,
    pub omega: Vec<f64>,
    pub sigma_s: Vec<Vec<Entry>>,
}

impl DoaScenarioFile {
    pub fn into_scenario(self) -> Result<DoaScenario> {
        if self.k != self.omega.len() {
            return Err(Error::InvalidScenario(format!(
                "K = {} but {} frequencies given",
                self.k,
                self.omega.len()
            )));
        }
        let sigma = HermitianMatrix::new(rows_to_matrix(&self.sigma_s)?)?;
        DoaScenario::new(self.n, self.p, self.omega, sigma)
    }

    pub fn from_scenario(s: &DoaScenario) -> Self {
        DoaScenarioFile {
            n: s.n_sensors,
            k: s.sources(),
            p: s.subarrays,
            omega: s.omega.clone(),
            sigma_s: matrix_to_rows(s.sigma_s.as_matrix()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpScenarioFile {
    pub d: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Entry>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Entry>>,
    pub g: Vec<Vec<f64>>,
}

impl CpScenarioFile {
    pub fn into_scenario(self) -> Result<CpScenario> {
        let a = rows_to_matrix(&self.a)?;
        let b = rows_to_matrix(&self.b)?;
        if a.cols() != self.d {
            return Err(Error::InvalidScenario(format!(
                "d = {} but A has {} columns",
                self.d,
                a.cols()
            )));
        }
        CpScenario::new(a, b, self.g)
    }

    pub fn from_scenario(s: &CpScenario) -> Self {
        CpScenarioFile {
            d: s.d(),
            a: matrix_to_rows(&s.a_load),
            b: matrix_to_rows(&s.b_load),
            g: s.g.clone(),
        }
    }
}
