//! Command-line front end for the `hadamard` binary.
//!
//! Exit codes: 0 when the bound or certificate was computed and verified, 1
//! when a hypothesis is not met or verification failed (the report says
//! which), 2 for input and usage errors.

pub mod matrix_file;
pub mod report;
pub mod scenario;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::apps::cp::cp_bound;
use crate::apps::doa::{doa_bound, rank_identity_check};
use crate::certify::{
    classical_bound, decompose_projection, indefinite_certificate, nonsingularity_predicate, projection_certificate,
    quantitative_bound, shift_construction,
};
use crate::matcore::{eigenvalues, lambda_min, rank_numeric, HermitianMatrix, Matrix};
use crate::submatrix::{kappa_eff, kruskal_rank, mu};
use crate::{scaled_tol, selftest, Error, Settings, DEFAULT_BUDGET, DEFAULT_TOL};

pub use matrix_file::{parse_matrix, parse_matrix_str, write_matrix};
pub use report::{emit_report, Inputs, Outcome, ReportDocument, Status};
pub use scenario::{CpScenarioFile, DoaScenarioFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Parser, Debug)]
#[command(name = "hadamard", version, about = "Eigenvalue lower bounds for Hadamard products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Matrix file for A
    #[arg(long, global = true)]
    pub a: Option<PathBuf>,
    /// Matrix file for B
    #[arg(long, global = true)]
    pub b: Option<PathBuf>,
    /// Matrix file for C
    #[arg(long, global = true)]
    pub c: Option<PathBuf>,
    /// Matrix file for the projection P
    #[arg(long, global = true)]
    pub p: Option<PathBuf>,
    /// JSON scenario file
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Principal submatrix order for `mu`
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Relative tolerance for rank and definiteness decisions
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Maximum number of subsets per enumeration
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for randomized self-tests
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Shift fraction in (0, 1] for certify-indefinite with --a/--b
    #[arg(long, global = true)]
    pub fraction: Option<f64>,
    /// Record wall-clock time in the report (makes output non-reproducible)
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Quantitative lower bound on lambda_min(A ∘ B)
    Bound,
    /// lambda_min(A) * min_i b_ii
    Classical,
    /// Kruskal rank of A
    Kruskal,
    /// mu_m(A)
    Mu,
    /// Effective condition number of B
    Kappa,
    /// Certificate for C ∘ P with P an orthogonal projection
    Projection,
    /// Certificate for C ∘ B with C indefinite
    CertifyIndefinite,
    /// Spatial-smoothing eigenvalue floor
    DoaBound,
    /// CP-factor spectral floor
    CpBound,
    /// Seeded randomized property suites
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Classical => "classical",
            Command::Kruskal => "kruskal",
            Command::Mu => "mu",
            Command::Kappa => "kappa",
            Command::Projection => "projection",
            Command::CertifyIndefinite => "certify-indefinite",
            Command::DoaBound => "doa-bound",
            Command::CpBound => "cp-bound",
            Command::Selftest => "selftest",
        }
    }
}

/// Result of [`dispatch`]: an exit code, the report (absent on usage
/// errors) and any message for stderr.
#[derive(Debug)]
pub struct Dispatch {
    pub exit_code: i32,
    pub report: Option<ReportDocument>,
    pub message: Option<String>,
    pub json_path: Option<PathBuf>,
}

fn usage(message: impl Into<String>) -> Dispatch {
    Dispatch {
        exit_code: 2,
        report: None,
        message: Some(message.into()),
        json_path: None,
    }
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    p.as_deref()
        .ok_or_else(|| CliError::Usage(format!("missing required flag --{}", flag)))
}

fn load_hermitian(p: &Option<PathBuf>, flag: &str) -> Result<HermitianMatrix, CliError> {
    let path = required(p, flag)?;
    let m = parse_matrix(path)?;
    HermitianMatrix::new(m).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))
}

fn load_json<T: serde::de::DeserializeOwned>(p: &Option<PathBuf>) -> Result<T, CliError> {
    let path = required(p, "scenario")?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        source_name: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Library errors that mean "a hypothesis is not met" rather than bad input.
fn hypothesis_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NotPositiveSemidefinite { .. }
            | Error::ZeroMatrix(_)
            | Error::NoAdmissibleShift { .. }
            | Error::Inconsistent { .. }
    )
}

type Computed = (Value, Outcome);

fn run_command(cmd: Command, o: &Options, settings: &Settings) -> Result<Computed, CliError> {
    let tol = settings.tol;
    match cmd {
        Command::Bound => {
            let a = load_hermitian(&o.a, "a")?;
            let b = load_hermitian(&o.b, "b")?;
            if a.n() != b.n() {
                return Err(CliError::Usage(format!("A is {0}x{0} but B is {1}x{1}", a.n(), b.n())));
            }
            let min_diag = b.min_diagonal();
            if min_diag <= scaled_tol(tol, b.max_abs()) {
                return Ok((
                    json!({ "min_diag": min_diag, "n": b.n() }),
                    Outcome::not_verified("min_diag is zero"),
                ));
            }
            let report = quantitative_bound(&a, &b, settings)?;
            let predicate = nonsingularity_predicate(&a, &b, settings)?;
            let ok = report.verified(tol);
            let mut v = to_value(&report);
            v["nonsingularity"] = to_value(&predicate);
            v["bound_positive"] = json!(report.quantitative_bound > scaled_tol(tol, report.actual_lambda_min.abs()));
            Ok((
                v,
                Outcome::from_flag(
                    ok,
                    "verification failed: Löwner inequality or eigenvalue bound violated",
                ),
            ))
        }
        Command::Classical => {
            let a = load_hermitian(&o.a, "a")?;
            let b = load_hermitian(&o.b, "b")?;
            let bound = classical_bound(&a, &b, tol)?;
            let actual = lambda_min(&a.hadamard(&b)?)?;
            let ok = bound <= actual + scaled_tol(tol, actual.abs());
            Ok((
                json!({ "classical_bound": bound, "actual_lambda_min": actual, "margin": actual - bound }),
                Outcome::from_flag(ok, "verification failed: classical bound exceeds lambda_min"),
            ))
        }
        Command::Kruskal => {
            let path = required(&o.a, "a")?;
            let m: Matrix = parse_matrix(path)?;
            let k = kruskal_rank(&m, tol, settings.budget)?;
            let mut v = json!({ "kruskal_rank": k, "rows": m.rows(), "cols": m.cols() });
            if let Ok(h) = HermitianMatrix::new(m) {
                v["rank"] = json!(rank_numeric(&h, tol)?);
            }
            Ok((v, Outcome::verified()))
        }
        Command::Mu => {
            let a = load_hermitian(&o.a, "a")?;
            let m = o.m.ok_or_else(|| CliError::Usage("missing required flag --m".into()))?;
            let r = mu(&a, m, settings.budget)?;
            Ok((
                json!({ "m": r.m, "mu": r.value, "argmin_subset": r.argmin_subset, "n": a.n() }),
                Outcome::verified(),
            ))
        }
        Command::Kappa => {
            let b = if o.b.is_some() {
                load_hermitian(&o.b, "b")?
            } else {
                load_hermitian(&o.a, "b")?
            };
            let k = kappa_eff(&b, tol)?;
            Ok((
                json!({ "kappa_eff": k, "rank": rank_numeric(&b, tol)?, "eigenvalues": eigenvalues(&b)? }),
                Outcome::verified(),
            ))
        }
        Command::Projection => {
            let c = load_hermitian(&o.c, "c")?;
            let p = load_hermitian(&o.p, "p")?;
            let verdict = match projection_certificate(&c, &p, settings) {
                Err(Error::NotProjection(msg)) => return Err(CliError::Usage(format!("P: {}", msg))),
                other => other?,
            };
            let mut v = to_value(&verdict);
            if p.n() >= 2 {
                let parts = decompose_projection(&p, tol)?;
                v["decomposition"] = json!({
                    "corner": parts.p,
                    "branch": parts.branch,
                    "inner_rank": parts.inner_rank,
                    "residuals": parts.residuals,
                });
            }
            let outcome = if !verdict.hypothesis_holds {
                Outcome::not_verified(format!(
                    "hypothesis not met: mu_{}(C) = {:e} is negative",
                    verdict.order, verdict.mu
                ))
            } else {
                Outcome::verified()
            };
            Ok((v, outcome))
        }
        Command::CertifyIndefinite => {
            let b = load_hermitian(&o.b, "b")?;
            let (c, shift) = match (&o.c, &o.a) {
                (Some(_), _) => (load_hermitian(&o.c, "c")?, None),
                (None, Some(_)) => {
                    let a = load_hermitian(&o.a, "a")?;
                    let s = shift_construction(&a, &b, o.fraction.unwrap_or(1.0), settings)?;
                    (s.c.clone(), Some(s))
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "certify-indefinite needs --c, or --a to build a shifted C".into(),
                    ))
                }
            };
            let verdict = indefinite_certificate(&c, &b, settings)?;
            let mut v = to_value(&verdict);
            if let Some(s) = shift {
                v["shift"] = json!({ "c": s.shift, "max_shift": s.max_shift });
            }
            let outcome = Outcome::from_flag(
                verdict.hypothesis_holds,
                format!(
                    "hypothesis not met: mu_{}(C) = {:e} < {:e}",
                    verdict.order, verdict.mu, verdict.required_mu
                ),
            );
            Ok((v, outcome))
        }
        Command::DoaBound => {
            let s = load_json::<DoaScenarioFile>(&o.scenario)?.into_scenario()?;
            let report = doa_bound(&s, settings)?;
            let identity = rank_identity_check(&s, settings)?;
            let ok = report.bound_holds;
            let mut v = to_value(&report);
            v["rank_identity"] = to_value(&identity);
            Ok((
                v,
                Outcome::from_flag(
                    ok,
                    "verification failed: bound exceeds lambda_min of the smoothed covariance",
                ),
            ))
        }
        Command::CpBound => {
            let s = load_json::<CpScenarioFile>(&o.scenario)?.into_scenario()?;
            let report = cp_bound(&s, settings)?;
            let ok = report.core_floor_holds && report.m1_floor_holds;
            Ok((
                to_value(&report),
                Outcome::from_flag(ok, "verification failed: spectral floor violated"),
            ))
        }
        Command::Selftest => {
            let suites = selftest::run_all(o.seed, settings);
            let failed: Vec<&str> = suites.iter().filter(|s| !s.passed()).map(|s| s.name.as_str()).collect();
            let outcome = Outcome::from_flag(
                failed.is_empty(),
                format!("suites with failures: {}", failed.join(", ")),
            );
            Ok((json!({ "suites": suites }), outcome))
        }
    }
}

/// Parse `argv` (including the program name) and run the subcommand.
pub fn dispatch<I, T>(argv: I) -> Dispatch
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Dispatch {
                exit_code: code,
                report: None,
                message: Some(e.to_string()),
                json_path: None,
            };
        }
    };
    let o = &cli.opts;
    if !(o.tol > 0.0 && o.tol.is_finite()) {
        return usage(format!("--tol must be positive, got {}", o.tol));
    }
    let settings = Settings::new(o.tol, o.budget);
    let inputs = Inputs {
        a: path_string(&o.a),
        b: path_string(&o.b),
        c: path_string(&o.c),
        p: path_string(&o.p),
        scenario: path_string(&o.scenario),
        m: o.m,
        fraction: o.fraction,
        tol: o.tol,
        budget: o.budget,
        seed: o.seed,
    };

    let start = Instant::now();
    let computed = run_command(cli.command, o, &settings);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let (results, outcome) = match computed {
        Ok(c) => c,
        Err(CliError::Core(e)) if hypothesis_failure(&e) => {
            (json!({ "error": e.to_string() }), Outcome::not_verified(e.to_string()))
        }
        Err(e) => return usage(e.to_string()),
    };
    let exit_code = outcome.exit_code;
    let message = outcome.reason.clone();
    Dispatch {
        exit_code,
        report: Some(ReportDocument {
            command: cli.command.name().to_string(),
            inputs,
            results,
            outcome,
            timing_ms: o.timing.then_some(elapsed),
        }),
        message,
        json_path: o.json.clone(),
    }
}

/// Dispatch, emit the report and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let d = dispatch(argv);
    if let Some(report) = &d.report {
        if let Err(e) = emit_report(report, d.json_path.as_deref()) {
            eprintln!("error: {}", e);
            return 2;
        }
    }
    if let Some(msg) = &d.message {
        if d.report.is_none() && d.exit_code == 0 {
            print!("{}", msg);
        } else {
            eprintln!("{}", msg.trim_end());
        }
    }
    d.exit_code
}
