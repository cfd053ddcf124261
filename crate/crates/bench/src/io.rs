//! Plain-text vector files and CSV tables.
//!
//! Dense vector file: first line `N`, then `N` lines `re im`.
//! Sparse output: one line `index re im` per nonzero entry.
//! Floats are written with Rust's shortest round-trip formatting.

use std::io::{BufRead, Write};

use dsfft::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

fn parse_f64(token: Option<&str>, line: usize) -> Result<f64, IoError> {
    let token = token.ok_or_else(|| parse_err(line, "expected two numbers"))?;
    token
        .parse()
        .map_err(|_| parse_err(line, format!("not a number: {token:?}")))
}

pub fn read_dense<R: BufRead>(reader: R) -> Result<Vec<Complex64>, IoError> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let header = header?;
    let len: usize = header
        .trim()
        .parse()
        .map_err(|_| parse_err(first, format!("expected length, got {header:?}")))?;
    let mut out = Vec::with_capacity(len);
    for (number, line) in lines {
        let line = line?;
        let mut tokens = line.split_whitespace();
        let re = parse_f64(tokens.next(), number)?;
        let im = parse_f64(tokens.next(), number)?;
        if tokens.next().is_some() {
            return Err(parse_err(number, "trailing tokens"));
        }
        out.push(Complex64::new(re, im));
    }
    if out.len() != len {
        return Err(parse_err(first, format!("header says {len} entries, found {}", out.len())));
    }
    Ok(out)
}

pub fn write_dense<W: Write>(mut writer: W, values: &[Complex64]) -> Result<(), IoError> {
    writeln!(writer, "{}", values.len())?;
    for v in values {
        writeln!(writer, "{} {}", v.re, v.im)?;
    }
    Ok(())
}

pub fn write_sparse<W: Write>(
    mut writer: W,
    support: &[usize],
    values: &[Complex64],
) -> Result<(), IoError> {
    for (k, v) in support.iter().zip(values) {
        writeln!(writer, "{k} {} {}", v.re, v.im)?;
    }
    Ok(())
}

/// Header row from the field names, then one record per row.
pub fn write_csv<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<(), IoError> {
    let mut csv = csv::Writer::from_writer(writer);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}
