//! Seeded randomized property suites behind `hadamard selftest`.
//!
//! Every case reduces to a margin that must be non-negative; a suite records
//! how many cases passed and the smallest margin seen. Each suite draws from
//! its own generator seeded from the run seed, so results do not depend on
//! which suites run or in what order.

use rand::Rng;
use serde::Serialize;

use crate::apps::cp::cp_bound;
use crate::apps::doa::{doa_bound, rank_identity_check, smoothed_cov_direct, smoothed_cov_hadamard};
use crate::certify::{
    classical_bound, decompose_projection, indefinite_certificate, projection_certificate, quantitative_bound,
    shift_construction,
};
use crate::matcore::{eig_hermitian, lambda_min, HermitianMatrix};
use crate::submatrix::{kruskal_rank_columns, kruskal_rank_psd, mu};
use crate::testgen::{self, TestRng};
use crate::{Error, Result, Settings};

/// Absolute slack allowed on eigenvalue inequalities.
pub const EIG_SLACK: f64 = 1e-8;

/// Absolute slack on identities that hold entrywise (the two DOA forms, the
/// two CP forms).
pub const IDENTITY_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest margin over all cases; negative means a violation.
    pub worst_margin: f64,
    /// Description of the first failing case, if any.
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

struct Tally {
    outcome: SuiteOutcome,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            outcome: SuiteOutcome {
                name: name.into(),
                cases: 0,
                passed: 0,
                failed: 0,
                worst_margin: f64::INFINITY,
                first_failure: None,
            },
        }
    }

    /// Record one case. An `Err` counts as a failure with margin -inf.
    fn record(&mut self, case: usize, margin: Result<f64>) {
        let o = &mut self.outcome;
        o.cases += 1;
        let (m, detail) = match margin {
            Ok(m) if m >= 0.0 => (m, None),
            Ok(m) => (m, Some(format!("case {}: margin {:e}", case, m))),
            Err(e) => (f64::NEG_INFINITY, Some(format!("case {}: {}", case, e))),
        };
        // NaN compares false, so it is caught here as a failure too.
        if detail.is_none() && !m.is_nan() {
            o.passed += 1;
        } else {
            o.failed += 1;
            if o.first_failure.is_none() {
                o.first_failure = Some(detail.unwrap_or_else(|| format!("case {}: NaN margin", case)));
            }
        }
        let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
        if m < o.worst_margin {
            o.worst_margin = m;
        }
    }

    fn finish(mut self) -> SuiteOutcome {
        if self.outcome.cases == 0 {
            self.outcome.worst_margin = 0.0;
        }
        self.outcome
    }
}

fn suite_rng(seed: u64, index: u64) -> TestRng {
    testgen::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index))
}

/// Eigensolver: reconstruction and orthonormality residuals.
pub fn eig_residuals(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 1);
    let mut t = Tally::new("eig_residuals");
    for case in 0..cases {
        let n = rng.random_range(1..=8);
        let a = testgen::random_hermitian(&mut rng, n);
        let margin = eig_hermitian(&a).map(|d| {
            let scale = a.max_abs().max(1.0);
            let res = d.reconstruction_residual(&a).max(d.orthonormality_residual() * scale);
            1e-10 * scale - res
        });
        t.record(case, margin);
    }
    t.finish()
}

/// Classical bound `lambda_min(A ∘ B) >= lambda_min(A) min_i b_ii`.
pub fn schur_product(seed: u64, cases: usize, settings: &Settings) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 2);
    let mut t = Tally::new("schur_product");
    for case in 0..cases {
        let n = rng.random_range(1..=7);
        let ra = rng.random_range(1..=n);
        let rb = rng.random_range(1..=n);
        let a = testgen::random_psd(&mut rng, n, ra);
        let b = testgen::random_psd(&mut rng, n, rb);
        let margin = (|| {
            let bound = classical_bound(&a, &b, settings.tol)?;
            Ok(lambda_min(&a.hadamard(&b)?)? - bound + EIG_SLACK)
        })();
        t.record(case, margin);
    }
    t.finish()
}

/// `A ∘ B - (mu / kappa_eff)(I ∘ B) ⪰ 0` for PSD pairs.
pub fn quantitative(seed: u64, cases: usize, settings: &Settings) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 3);
    let mut t = Tally::new("quantitative_bound");
    for case in 0..cases {
        let n = rng.random_range(2..=7);
        let rb = rng.random_range(1..=n);
        let ra = rng.random_range(1..=n);
        let a = testgen::random_psd(&mut rng, n, ra);
        let b = testgen::random_psd(&mut rng, n, rb);
        let margin = (|| {
            let r = quantitative_bound(&a, &b, settings)?;
            let gap = a.hadamard(&b)?.sub(&b.diagonal_part().scale(r.mu / r.kappa_eff))?;
            Ok(lambda_min(&gap)? + EIG_SLACK)
        })();
        t.record(case, margin);
    }
    t.finish()
}

/// `C = A - mu_{n-r+1}(A) I` with a rank-`r` projection `P`: `C ∘ P ⪰ 0`.
pub fn projection(seed: u64, cases: usize, settings: &Settings) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 4);
    let mut t = Tally::new("projection_certificate");
    for case in 0..cases {
        let n = rng.random_range(2..=7);
        let r = rng.random_range(1..=n);
        let a = testgen::random_hermitian(&mut rng, n);
        let p = testgen::random_projection(&mut rng, n, r);
        let margin = (|| {
            let shift = mu(&a, n - r + 1, settings.budget)?.value;
            let c = a.shift(shift);
            let v = projection_certificate(&c, &p, settings)?;
            if !v.hypothesis_holds {
                return Err(Error::InvalidArgument(format!(
                    "hypothesis failed with mu = {:e}",
                    v.mu
                )));
            }
            Ok(v.lambda_min_product + EIG_SLACK)
        })();
        t.record(case, margin);
    }
    t.finish()
}

/// Sizes for the indefinite-factor suite: `n` in 3..=6, `r_B` in
/// `2..=n-1` and `r_A` in `n-r_B+1..=n-1`, so `A` is singular and
/// `mu_{n-r_B+1}(A) > 0` generically, making the shifted `C` indefinite.
pub fn indefinite_sizes(rng: &mut TestRng) -> (usize, usize, usize) {
    let n = rng.random_range(3..=6);
    let rb = rng.random_range(2..n);
    let ra = rng.random_range(n - rb + 1..n);
    (n, ra, rb)
}

/// Shifted `C = A - c I` with the largest admissible `c`: `C ∘ B ⪰ 0`.
/// Also counts how many generated `C` are indefinite.
pub fn indefinite(seed: u64, cases: usize, settings: &Settings) -> (SuiteOutcome, usize) {
    let mut rng = suite_rng(seed, 5);
    let mut t = Tally::new("indefinite_certificate");
    let mut indefinite_count = 0;
    for case in 0..cases {
        let (n, ra, rb) = indefinite_sizes(&mut rng);
        let a = testgen::random_psd(&mut rng, n, ra);
        let b = testgen::random_psd(&mut rng, n, rb);
        let margin = (|| {
            let s = shift_construction(&a, &b, 1.0, settings)?;
            let v = indefinite_certificate(&s.c, &b, settings)?;
            if v.c_indefinite {
                indefinite_count += 1;
            }
            if !v.hypothesis_holds {
                return Err(Error::InvalidArgument(format!(
                    "hypothesis failed: mu = {:e} < {:e}",
                    v.mu, v.required_mu
                )));
            }
            Ok(v.lambda_min_product + EIG_SLACK)
        })();
        t.record(case, margin);
    }
    (t.finish(), indefinite_count)
}

/// Bordered decomposition of random projections: every identity residual is
/// at most `EIG_SLACK`.
pub fn bordered_projection(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 6);
    let mut t = Tally::new("bordered_projection");
    for case in 0..cases {
        let n = rng.random_range(2..=8);
        let r = rng.random_range(0..=n);
        let p = testgen::random_projection(&mut rng, n, r);
        // Generous internal tolerance so the residuals are measured, not rejected.
        let margin = decompose_projection(&p, 1e-6).map(|parts| EIG_SLACK - parts.residuals.max());
        t.record(case, margin);
    }
    t.finish()
}

/// Random DOA scenario sizes: `N` in 2..=8, `K < N`, `P <= N`, `rank <= K`.
pub fn doa_sizes(rng: &mut TestRng) -> (usize, usize, usize, usize) {
    let n = rng.random_range(2..=8);
    let k = rng.random_range(1..n);
    let p = rng.random_range(1..=n);
    let rank = rng.random_range(1..=k);
    (n, p, k, rank)
}

/// Smoothing identity, floor inequality, rank identity and, for rank-one
/// source covariance, positivity of the floor exactly when `P >= K`.
pub fn doa(seed: u64, cases: usize, settings: &Settings) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 7);
    let mut t = Tally::new("doa");
    for case in 0..cases {
        let (n, p, k, rank) = doa_sizes(&mut rng);
        // Every fourth case uses a rank-one source covariance (fully coherent).
        let rank = if case % 4 == 0 { 1 } else { rank };
        let s = testgen::random_doa_scenario(&mut rng, n, p, k, rank);
        let margin = (|| {
            let diff = smoothed_cov_direct(&s).max_abs_diff(&smoothed_cov_hadamard(&s))?;
            let r = doa_bound(&s, settings)?;
            let id = rank_identity_check(&s, settings)?;
            let mut m = (IDENTITY_SLACK - diff).min(r.lambda_min_smoothed + EIG_SLACK - r.bound);
            if !id.holds {
                m = m.min(-1.0);
            }
            if r.r_sigma_s == 1 && (r.bound > 1e-12) != (p >= k) {
                m = m.min(-1.0);
            }
            Ok(m)
        })();
        t.record(case, margin);
    }
    t.finish()
}

/// Random CP scenario sizes `(p, q, d, lags, rank_a, rank_b)`.
pub fn cp_sizes(rng: &mut TestRng) -> (usize, usize, usize, usize, usize, usize) {
    let p = rng.random_range(2..=5);
    let q = rng.random_range(2..=5);
    let d = rng.random_range(2..=5);
    let lags = rng.random_range(1..=d + 1);
    let rank_a = rng.random_range(1..=p.min(d));
    let rank_b = rng.random_range(1..=q.min(d));
    (p, q, d, lags, rank_a, rank_b)
}

/// CP-factor floors: the two forms of `M_1` agree and, when
/// `k_G >= d - d_2 + 1`, `lambda+_min(M_1) >= m1_floor`.
pub fn cp(seed: u64, cases: usize, settings: &Settings) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 8);
    let mut t = Tally::new("cp");
    for case in 0..cases {
        let (p, q, d, lags, ra, rb) = cp_sizes(&mut rng);
        let s = testgen::random_cp_scenario(&mut rng, p, q, d, lags, ra, rb);
        let margin = cp_bound(&s, settings).map(|r| {
            let mut m = IDENTITY_SLACK - r.m1_form_difference;
            m = m.min(r.lambda_min_core + EIG_SLACK - r.hadamard_floor);
            if r.condition_met {
                let pos = r.lambda_min_pos_m1.unwrap_or(0.0);
                m = m.min(pos + EIG_SLACK - r.m1_floor);
            }
            m
        });
        t.record(case, margin);
    }
    t.finish()
}

/// PSD matrix whose frame may have a repeated (scaled) row, so the Kruskal
/// rank can fall below the rank.
pub fn kruskal_test_matrix(rng: &mut TestRng) -> HermitianMatrix {
    let n = rng.random_range(1..=6);
    let rank = rng.random_range(1..=n);
    let mut f = testgen::gaussian_matrix(rng, n, rank);
    if n >= 2 && rng.random_range(0..3) == 0 {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let s = rng.random_range(0.5..2.0);
        for c in 0..rank {
            f[(j, c)] = f[(i, c)] * s;
        }
    }
    HermitianMatrix::outer_gram(&f)
}

/// Kruskal rank: principal-minor path against the column-subset path.
pub fn kruskal_paths(seed: u64, cases: usize, settings: &Settings) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 9);
    let mut t = Tally::new("kruskal_paths");
    for case in 0..cases {
        let a = kruskal_test_matrix(&mut rng);
        let margin = (|| {
            let fast = kruskal_rank_psd(&a, settings.tol, settings.budget)?;
            let cols = kruskal_rank_columns(&a, settings.tol, settings.budget)?;
            Ok(if fast == cols { 0.0 } else { -1.0 })
        })();
        t.record(case, margin);
    }
    t.finish()
}

/// `mu_1 = min diag`, `mu_n = lambda_min` and `mu_m` non-increasing in `m`.
pub fn mu_interlacing(seed: u64, cases: usize, settings: &Settings) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 10);
    let mut t = Tally::new("mu_interlacing");
    for case in 0..cases {
        let n = rng.random_range(1..=7);
        let a = testgen::random_hermitian(&mut rng, n);
        let margin = (|| {
            let scale = a.max_abs().max(1.0);
            let eps = 1e-10 * scale;
            let values: Vec<f64> = (1..=n)
                .map(|m| mu(&a, m, settings.budget).map(|r| r.value))
                .collect::<Result<_>>()?;
            let mut margin = eps - (values[0] - a.min_diagonal()).abs();
            margin = margin.min(eps - (values[n - 1] - lambda_min(&a)?).abs());
            for w in values.windows(2) {
                margin = margin.min(w[0] - w[1] + eps);
            }
            Ok(margin)
        })();
        t.record(case, margin);
    }
    t.finish()
}

/// Run every suite at its default size.
pub fn run_all(seed: u64, settings: &Settings) -> Vec<SuiteOutcome> {
    let (indef, _) = indefinite(seed, 500, settings);
    vec![
        eig_residuals(seed, 1000),
        schur_product(seed, 500, settings),
        quantitative(seed, 1000, settings),
        projection(seed, 500, settings),
        indef,
        bordered_projection(seed, 500),
        doa(seed, 500, settings),
        cp(seed, 300, settings),
        kruskal_paths(seed, 200, settings),
        mu_interlacing(seed, 200, settings),
    ]
}
