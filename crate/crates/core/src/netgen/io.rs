//! Dense text matrix format.
//!
//! ```text
//! linsync-matrix 1
//! <n>
//! <C_11> <C_12> ... <C_1n>
//! ...
//! <C_n1> ... <C_nn>
//! ```
//!
//! Row `j` holds the outgoing weights of node `j`. Values are written with
//! 17 significant digits so that a round trip is bit-exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use super::ConnectivityMatrix;
use crate::error::{Error, Result};

pub const MATRIX_MAGIC: &str = "linsync-matrix 1";

pub fn write_matrix_to<W: Write>(c: &ConnectivityMatrix, mut out: W) -> Result<()> {
    let n = c.n();
    writeln!(out, "{MATRIX_MAGIC}")?;
    writeln!(out, "{n}")?;
    let mut line = String::new();
    for j in 0..n {
        line.clear();
        for i in 0..n {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{:.16e}", c.weight(j, i)));
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_matrix(c: &ConnectivityMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_matrix_to(c, BufWriter::new(File::create(path)?))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_matrix_from<R: Read>(input: R) -> Result<ConnectivityMatrix> {
    let mut lines = BufReader::new(input).lines().enumerate().map(|(k, l)| (k + 1, l));

    let (no, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if header?.trim() != MATRIX_MAGIC {
        return Err(parse_err(no, format!("expected header \"{MATRIX_MAGIC}\"")));
    }
    let (no, size) = lines
        .next()
        .ok_or_else(|| parse_err(2, "missing node count"))?;
    let size = size?;
    let n: usize = size
        .trim()
        .parse()
        .map_err(|_| parse_err(no, format!("invalid node count {:?}", size.trim())))?;
    if n == 0 {
        return Err(parse_err(no, "node count must be positive"));
    }

    let mut m = DMatrix::zeros(n, n);
    let mut row = 0;
    let mut last_line = no;
    for (no, line) in lines {
        let line = line?;
        last_line = no;
        if line.trim().is_empty() {
            continue;
        }
        if row == n {
            return Err(parse_err(no, format!("more than {n} rows")));
        }
        let mut count = 0;
        for (i, tok) in line.split_whitespace().enumerate() {
            if i >= n {
                count = i + 1;
                continue;
            }
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(no, format!("non-numeric token {tok:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(no, format!("non-finite value {tok:?}")));
            }
            m[(row, i)] = v;
            count = i + 1;
        }
        if count != n {
            return Err(parse_err(no, format!("expected {n} values, found {count}")));
        }
        row += 1;
    }
    if row != n {
        return Err(parse_err(
            last_line,
            format!("dimension mismatch: header declares {n} rows, found {row}"),
        ));
    }
    ConnectivityMatrix::new(m)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ConnectivityMatrix> {
    read_matrix_from(File::open(path)?)
}
