//! Text formats for sequences and ambiguity grids.
//!
//! Sequence files hold one record per line: `2n` comma-separated reals
//! `a_0..a_{n-1}, b_0..b_{n-1}` written with 17 significant digits, which
//! round-trips every `f64` exactly. Blank lines and lines starting with `#`
//! are ignored.
//!
//! Grid files start with `n=<n>,kind=<periodic|aperiodic>` followed by `n`
//! rows (time shift `k`) of `n` magnitudes (frequency shift `ℓ`) normalized
//! by the `(0, 0)` value, 9 significant digits.

use std::fmt::Write as _;

use crate::correlate::{AmbiguityGrid, GridKind};
use crate::error::{Error, Result};
use crate::seq::{embed, lift, ComplexSeq, RealEmbedding};

pub fn format_record(x: &ComplexSeq) -> String {
    let v = embed(x);
    let mut line = String::with_capacity(v.as_slice().len() * 25);
    for (i, value) in v.as_slice().iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        write!(line, "{value:.16e}").expect("writing to String");
    }
    line
}

/// Parses one record; `line` is the 1-based line number used in errors.
pub fn parse_record(text: &str, line: usize) -> Result<ComplexSeq> {
    let values = text
        .split(',')
        .map(|field| {
            let field = field.trim();
            field.parse::<f64>().map_err(|_| Error::Parse { line, message: format!("not a number: '{field}'") })
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() % 2 != 0 {
        return Err(Error::Parse { line, message: format!("odd number of values ({})", values.len()) });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parse { line, message: "non-finite value".into() });
    }
    let v = RealEmbedding::from_flat(values).map_err(|e| Error::Parse { line, message: e.to_string() })?;
    Ok(lift(&v))
}

pub fn parse_sequences(text: &str) -> Result<Vec<ComplexSeq>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_record(l.trim(), i + 1))
        .collect()
}

/// Comment lines (each prefixed with `# `) followed by one record per line.
pub fn format_sequences<'a>(comments: &[String], seqs: impl IntoIterator<Item = &'a ComplexSeq>) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}").expect("writing to String");
        }
    }
    for s in seqs {
        out.push_str(&format_record(s));
        out.push('\n');
    }
    out
}

pub fn format_grid(grid: &AmbiguityGrid) -> String {
    let n = grid.n();
    let mags = grid.normalized_magnitudes();
    let mut out = format!("n={n},kind={}\n", grid.kind().as_str());
    for row in mags.chunks_exact(n) {
        for (l, m) in row.iter().enumerate() {
            if l > 0 {
                out.push(',');
            }
            write!(out, "{m:.8e}").expect("writing to String");
        }
        out.push('\n');
    }
    out
}

/// Parses a grid file back into `(n, kind, row-major magnitudes)`.
pub fn parse_grid(text: &str) -> Result<(usize, GridKind, Vec<f64>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(Error::Parse { line: 1, message: "empty grid file".into() })?;
    let bad_header = || Error::Parse { line: 1, message: format!("bad grid header '{header}'") };
    let (n_part, kind_part) = header.split_once(',').ok_or_else(bad_header)?;
    let n: usize = n_part.strip_prefix("n=").and_then(|v| v.parse().ok()).ok_or_else(bad_header)?;
    let kind: GridKind = kind_part.strip_prefix("kind=").and_then(|v| v.parse().ok()).ok_or_else(bad_header)?;
    let mut values = Vec::with_capacity(n * n);
    for (i, row) in lines.enumerate() {
        let line = i + 2;
        let parsed = row
            .split(',')
            .map(|f| f.trim().parse::<f64>().map_err(|_| Error::Parse { line, message: format!("bad value '{f}'") }))
            .collect::<Result<Vec<_>>>()?;
        if parsed.len() != n {
            return Err(Error::Parse { line, message: format!("expected {n} values, got {}", parsed.len()) });
        }
        values.extend(parsed);
    }
    if values.len() != n * n {
        return Err(Error::Parse { line: 1, message: format!("expected {n} rows") });
    }
    Ok((n, kind, values))
}
