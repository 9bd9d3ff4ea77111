use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::CliError;

/// Echo of the invocation.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Inputs {
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub p: Option<String>,
    pub scenario: Option<String>,
    pub m: Option<usize>,
    pub fraction: Option<f64>,
    pub tol: f64,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Bound or certificate computed and verified (exit 0).
    Verified,
    /// Hypothesis not met or verification failed (exit 1).
    NotVerified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub status: Status,
    pub exit_code: i32,
    pub reason: Option<String>,
}

impl Outcome {
    pub fn verified() -> Self {
        Outcome {
            status: Status::Verified,
            exit_code: 0,
            reason: None,
        }
    }

    pub fn not_verified(reason: impl Into<String>) -> Self {
        Outcome {
            status: Status::NotVerified,
            exit_code: 1,
            reason: Some(reason.into()),
        }
    }

    pub fn from_flag(ok: bool, reason: impl Into<String>) -> Self {
        if ok {
            Self::verified()
        } else {
            Self::not_verified(reason)
        }
    }
}

/// JSON report. Keys appear in declaration order here and sorted order
/// inside `results`; `timing_ms` is `null` unless timing was requested.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: Inputs,
    pub results: Value,
    pub outcome: Outcome,
    pub timing_ms: Option<f64>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}

/// Write to `path`, or to stdout when `path` is `None`.
pub fn emit_report(doc: &ReportDocument, path: Option<&Path>) -> Result<(), CliError> {
    let text = doc.to_json();
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    message: e.to_string(),
                })
        }
    }
}
