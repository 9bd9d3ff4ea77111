//! Plain-text matrix files.
//!
//! ```text
//! n 3 3 real
//! 2 1 1
//! 1 1 0
//! 1 0 1
//! ```
//!
//! The header is `n <rows> <cols> <real|complex>`; each following line holds
//! one row of whitespace-separated entries. Complex entries are written
//! `re,im` with no spaces. Blank lines and lines starting with `#` or `%` are
//! ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::CliError;
use crate::matcore::{Matrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        source_name: String::new(),
        line,
        column,
        message: message.into(),
    }
}

fn parse_float(tok: &str, line: usize, column: usize) -> Result<f64, CliError> {
    tok.parse::<f64>()
        .map_err(|_| parse_error(line, column, format!("cannot parse '{}' as a number", tok)))
}

fn parse_entry(tok: &str, field: Field, line: usize, column: usize) -> Result<C64, CliError> {
    match (tok.split_once(','), field) {
        (None, _) => Ok(C64::new(parse_float(tok, line, column)?, 0.0)),
        (Some((re, im)), Field::Complex) => Ok(C64::new(
            parse_float(re, line, column)?,
            parse_float(im, line, column + re.len() + 1)?,
        )),
        (Some(_), Field::Real) => Err(parse_error(
            line,
            column,
            format!("complex entry '{}' in a real matrix", tok),
        )),
    }
}

/// Tokens with their 1-based starting columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
}

pub fn parse_matrix_str(text: &str) -> Result<Matrix, CliError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
        let t = l.trim_start();
        !t.is_empty() && !t.starts_with('#') && !t.starts_with('%')
    });

    let (hline, header) = lines.next().ok_or_else(|| parse_error(1, 1, "missing header line"))?;
    let head: Vec<(usize, &str)> = tokens(header).collect();
    if head.len() != 4 || head[0].1 != "n" {
        return Err(parse_error(
            hline,
            1,
            "header must read 'n <rows> <cols> <real|complex>'",
        ));
    }
    let dim = |(col, tok): (usize, &str)| {
        tok.parse::<usize>()
            .map_err(|_| parse_error(hline, col, format!("invalid dimension '{}'", tok)))
    };
    let rows = dim(head[1])?;
    let cols = dim(head[2])?;
    let field = match head[3].1 {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(parse_error(hline, head[3].0, format!("unknown field '{}'", other))),
    };

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    let mut last_line = hline;
    for (ln, line) in lines {
        last_line = ln;
        if seen == rows {
            return Err(parse_error(ln, 1, format!("more than the declared {} rows", rows)));
        }
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == cols {
                return Err(parse_error(
                    ln,
                    col,
                    format!("row has more than the declared {} entries", cols),
                ));
            }
            data.push(parse_entry(tok, field, ln, col)?);
            count += 1;
        }
        if count != cols {
            return Err(parse_error(
                ln,
                line.len() + 1,
                format!("row has {} entries, expected {}", count, cols),
            ));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(parse_error(
            last_line + 1,
            1,
            format!("found {} rows, expected {}", seen, rows),
        ));
    }
    Ok(Matrix::from_vec(rows, cols, data).expect("counted"))
}

pub fn parse_matrix(path: &Path) -> Result<Matrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix_str(&text).map_err(|e| match e {
        CliError::Parse {
            line, column, message, ..
        } => CliError::Parse {
            source_name: path.display().to_string(),
            line,
            column,
            message,
        },
        other => other,
    })
}

/// Serialize in the same format with shortest round-trip float formatting.
pub fn write_matrix(m: &Matrix) -> String {
    let field = if m.is_real() { "real" } else { "complex" };
    let mut out = format!("n {} {} {}\n", m.rows(), m.cols(), field);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            let z = m[(i, j)];
            if m.is_real() {
                write!(out, "{:?}", z.re).unwrap();
            } else {
                write!(out, "{:?},{:?}", z.re, z.im).unwrap();
            }
        }
        out.push('\n');
    }
    out
}
