use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {tol:e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("enumeration of C({n},{m}) = {count} subsets exceeds the budget of {budget}")]
    BudgetExceeded {
        n: usize,
        m: usize,
        count: u128,
        budget: u64,
    },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("pivot {value:e} at index {index} is not positive; Schur complement undefined")]
    NonPositivePivot { index: usize, value: f64 },

    #[error("{which} is not positive semidefinite (lambda_min = {lambda_min:e})")]
    NotPositiveSemidefinite { which: String, lambda_min: f64 },

    #[error("{0} is numerically zero")]
    ZeroMatrix(String),

    #[error("matrix is not an orthogonal projection: {0}")]
    NotProjection(String),

    #[error("projection trace {trace} is not within 1e-6 of an integer")]
    NonIntegralTrace { trace: f64 },

    #[error("invariant {name} violated: residual {residual:e} exceeds {tol:e}")]
    InvariantViolated { name: String, residual: f64, tol: f64 },

    #[error("certificate inconsistency: hypothesis holds but lambda_min of the product is {lambda_min:e}")]
    Inconsistent { lambda_min: f64 },

    #[error("no admissible shift: quantitative bound {bound:e} is not positive")]
    NoAdmissibleShift { bound: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
