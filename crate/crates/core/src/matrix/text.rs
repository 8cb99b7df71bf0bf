//! Plain-text matrix files.
//!
//! ```text
//! # comment
//! 7 6 2 2
//! 1*7^3  1
//! 0      -1*7^3
//! ```
//!
//! The header is `p N n m`; each of the `n` rows holds `m` entries, written
//! either as a plain integer or as `u*p^v` (the base may be the prime's
//! digits or the letter `p`, and `v` may be negative).

use num_bigint::BigInt;

use super::PadicMatrix;
use crate::error::{Error, Result};
use crate::padic::{check_prime, signed_scaled, Padic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub prime: u64,
    pub precision: i64,
    pub matrix: PadicMatrix,
}

fn parse_entry(tok: &str, p: u64, prec: i64, line: usize, col: usize) -> Result<Padic> {
    let bad = |msg: &str| Error::parse(line, col, format!("{msg} in entry `{tok}`"));
    let (coeff, power) = match tok.split_once('*') {
        Some((c, rest)) => (c, Some(rest)),
        None if tok.contains('^') => ("1", Some(tok)),
        None => (tok, None),
    };
    let coeff: BigInt = coeff.parse().map_err(|_| bad("invalid integer"))?;
    let shift = match power {
        None => 0,
        Some(pw) => {
            let (base, exp) = pw.split_once('^').unwrap_or((pw, "1"));
            if base != "p" && base.parse::<u64>().ok() != Some(p) {
                return Err(bad("power base is not the prime"));
            }
            exp.parse::<i64>().map_err(|_| bad("invalid exponent"))?
        }
    };
    Ok(signed_scaled(p, &coeff, shift, prec))
}

/// Parses the text matrix format.
pub fn parse_matrix_file(text: &str) -> Result<MatrixFile> {
    parse_matrix_file_at(text, None)
}

/// Like [`parse_matrix_file`], but entries are read at `precision` instead
/// of the header's value when one is given.
pub fn parse_matrix_file_at(text: &str, precision: Option<i64>) -> Result<MatrixFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing header `p N n m`"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::parse(hline, 1, "header must be `p N n m`"));
    }
    let num = |i: usize| -> Result<i64> {
        fields[i]
            .parse::<i64>()
            .map_err(|_| Error::parse(hline, column_of(header, fields[i]), "expected an integer"))
    };
    let (p, prec, n, m) = (num(0)?, num(1)?, num(2)?, num(3)?);
    if p < 2 || n < 0 || m < 0 {
        return Err(Error::parse(hline, 1, "invalid header values"));
    }
    let p = p as u64;
    check_prime(p).map_err(|e| Error::parse(hline, 1, e.to_string()))?;
    if prec < 1 {
        return Err(Error::parse(hline, column_of(header, fields[1]), "precision must be ≥ 1"));
    }
    let prec = match precision {
        Some(n) if n < 1 => return Err(Error::Domain(format!("precision must be ≥ 1, got {n}"))),
        Some(n) => n,
        None => prec,
    };
    let (n, m) = (n as usize, m as usize);
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let (ln, body) = lines
            .next()
            .ok_or_else(|| Error::parse(hline + r + 1, 1, format!("expected {n} rows, found {r}")))?;
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != m {
            return Err(Error::parse(ln, 1, format!("expected {m} entries, found {}", toks.len())));
        }
        rows.push(
            toks.iter()
                .map(|t| parse_entry(t, p, prec, ln, column_of(body, t)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, 1, "trailing content after matrix rows"));
    }
    let matrix = if n == 0 {
        PadicMatrix::zeros(p, 0, m, prec)
    } else {
        PadicMatrix::from_rows(p, rows)?
    };
    Ok(MatrixFile {
        prime: p,
        precision: prec,
        matrix,
    })
}

/// 1-based column of `tok` inside `line` (`tok` must be a subslice).
fn column_of(line: &str, tok: &str) -> usize {
    (tok.as_ptr() as usize).saturating_sub(line.as_ptr() as usize) + 1
}

/// Renders a matrix in the text format at precision `precision`.
pub fn write_matrix_file(matrix: &PadicMatrix, precision: i64) -> String {
    let p = matrix.prime();
    let mut out = format!("{p} {precision} {} {}\n", matrix.rows(), matrix.cols());
    for i in 0..matrix.rows() {
        let row: Vec<String> = matrix
            .row(i)
            .iter()
            .map(|x| {
                if x.is_zero() {
                    "0".to_string()
                } else if x.valuation() == 0 {
                    x.unit().to_string()
                } else {
                    format!("{}*{p}^{}", x.unit(), x.valuation())
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
