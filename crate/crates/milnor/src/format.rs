//! Plain-text input and output formats.
//!
//! Structure constants: the first line is `n`, every further line is
//! `i j k v` with 1-based indices and `i < j`, meaning `c_{ij}^k = v`.
//! The `j < i` half follows by antisymmetry and unlisted entries are zero.
//!
//! Matrices: one row per line, entries separated by whitespace.
//!
//! Blank lines and lines starting with `#` are ignored in both.

use std::fmt::Write as _;

use milnor_core::{LieAlgebra, Matrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("input is empty")]
    Empty,
    #[error("line {line}: cannot parse `{token}` as a number")]
    Number { line: usize, token: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Fields { line: usize, expected: usize, found: usize },
    #[error("line {line}: index {index} out of range 1..={n}")]
    Index { line: usize, index: usize, n: usize },
    #[error("line {line}: pairs must satisfy i < j")]
    Order { line: usize },
    #[error("line {line}: entry ({i}, {j}, {k}) listed twice")]
    Duplicate { line: usize, i: usize, j: usize, k: usize },
    #[error("matrix has {rows} rows of length {cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(line: usize, token: &str) -> Result<f64, FormatError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| FormatError::Number {
            line,
            token: token.to_string(),
        })
}

fn index(line: usize, token: &str, n: usize) -> Result<usize, FormatError> {
    let i: usize = token.parse().map_err(|_| FormatError::Number {
        line,
        token: token.to_string(),
    })?;
    if i == 0 || i > n {
        return Err(FormatError::Index { line, index: i, n });
    }
    Ok(i - 1)
}

/// Parsed entries as 0-based `(i, j, k, v)` plus the dimension.
pub fn parse_structure_constants(text: &str) -> Result<(usize, Vec<(usize, usize, usize, f64)>), FormatError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or(FormatError::Empty)?;
    let n: usize = header.parse().map_err(|_| FormatError::Number {
        line: first,
        token: header.to_string(),
    })?;
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(FormatError::Fields {
                line,
                expected: 4,
                found: fields.len(),
            });
        }
        let i = index(line, fields[0], n)?;
        let j = index(line, fields[1], n)?;
        let k = index(line, fields[2], n)?;
        let v = number(line, fields[3])?;
        if i >= j {
            return Err(FormatError::Order { line });
        }
        if !seen.insert((i, j, k)) {
            return Err(FormatError::Duplicate {
                line,
                i: i + 1,
                j: j + 1,
                k: k + 1,
            });
        }
        entries.push((i, j, k, v));
    }
    Ok((n, entries))
}

pub fn read_algebra(text: &str) -> Result<LieAlgebra, crate::CliError> {
    let (n, entries) = parse_structure_constants(text)?;
    Ok(LieAlgebra::from_entries(n, &entries)?)
}

pub fn write_structure_constants(alg: &LieAlgebra) -> String {
    let n = alg.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                let v = alg.constant(i, j, k);
                if v != 0.0 {
                    let _ = writeln!(out, "{} {} {} {}", i + 1, j + 1, k + 1, v);
                }
            }
        }
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<Matrix, FormatError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, l) in content_lines(text) {
        let row = l
            .split_whitespace()
            .map(|t| number(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(FormatError::Fields {
                    line,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FormatError::Empty);
    }
    let (r, c) = (rows.len(), rows[0].len());
    if r != c {
        return Err(FormatError::NotSquare { rows: r, cols: c });
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}
