//! Shared reader/writer for the line-oriented grid formats (`PMASK1`, `IPROF1`, `CGRID1`).
//!
//! Layout: a header line `<MAGIC> <fields...>`, then one line per grid row with
//! space-separated values. Lines starting with `#` and blank lines are skipped.

use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

pub(crate) struct Grid {
    pub header: Vec<String>,
    /// Row-major values, tagged with the 1-based source line of their row.
    pub rows: Vec<(usize, Vec<String>)>,
}

pub(crate) fn read_grid<R: BufRead>(reader: R, magic: &str) -> Result<Grid> {
    let mut header = None;
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<String> = trimmed.split_whitespace().map(str::to_owned).collect();
        if header.is_none() {
            if tokens[0] != magic {
                return Err(Error::malformed(
                    lineno,
                    format!("expected `{magic}` header, found `{}`", tokens[0]),
                ));
            }
            header = Some(tokens[1..].to_vec());
        } else {
            rows.push((lineno, tokens));
        }
    }
    let header = header.ok_or_else(|| Error::malformed(1, format!("missing `{magic}` header")))?;
    Ok(Grid { header, rows })
}

pub(crate) fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::malformed(line, format!("bad {what} `{token}`")))
}

pub(crate) fn parse_f64(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| Error::malformed(line, format!("bad number `{token}`")))?;
    if !v.is_finite() {
        return Err(Error::malformed(line, format!("non-finite value `{token}`")));
    }
    Ok(v)
}

impl Grid {
    /// Checks the payload is `height` rows of `width` values and returns them flattened.
    pub fn values(&self, width: usize, height: usize) -> Result<Vec<(usize, &str)>> {
        if self.rows.len() != height {
            let line = self.rows.last().map_or(1, |(l, _)| *l);
            return Err(Error::malformed(
                line,
                format!("header declares {height} rows, payload has {}", self.rows.len()),
            ));
        }
        let mut out = Vec::with_capacity(width * height);
        for (line, tokens) in &self.rows {
            if tokens.len() != width {
                return Err(Error::malformed(
                    *line,
                    format!("expected {width} values, found {}", tokens.len()),
                ));
            }
            out.extend(tokens.iter().map(|t| (*line, t.as_str())));
        }
        Ok(out)
    }
}

/// Writes `header` then the grid rows. `fmt` renders one value.
pub(crate) fn write_grid<T, F>(header: &str, values: &[T], width: usize, fmt: F) -> String
where
    F: Fn(&T, &mut String),
{
    let mut out = String::with_capacity(header.len() + values.len() * 8);
    out.push_str(header);
    out.push('\n');
    for row in values.chunks(width.max(1)) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            fmt(v, &mut out);
        }
        out.push('\n');
    }
    out
}

/// Shortest decimal that parses back to the same `f64`.
pub(crate) fn push_f64(x: f64, out: &mut String) {
    let _ = write!(out, "{x}");
}
