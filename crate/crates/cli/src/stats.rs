//! PSL/ISL tables with per-file five-number summaries and reference rows.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use cazac::correlate::sidelobe_metrics;
use cazac::families::{self, QuadraticPhaseSpec};
use cazac::{verify_cazac, ComplexSeq};

use crate::commands::CliError;

/// Tolerance for the `verified` column.
pub const STATS_VERIFY_TOL: f64 = 1e-8;

pub const HEADER: &str = "kind,source,n,label,psl,isl,verified";

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    /// `sequence`, `summary` or `reference`.
    pub kind: &'static str,
    pub source: String,
    pub n: usize,
    pub label: String,
    pub psl: f64,
    pub isl: f64,
    /// Empty for summary rows.
    pub verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub rows: Vec<Row>,
    pub sequence_rows: usize,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for r in &self.rows {
            let verified = r.verified.map_or("", |v| if v { "true" } else { "false" });
            writeln!(out, "{},{},{},{},{:.9e},{:.9e},{}", r.kind, r.source, r.n, r.label, r.psl, r.isl, verified)
                .expect("writing to String");
        }
        out
    }
}

/// Quantile by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `(min, q1, median, q3, max)`.
pub fn five_numbers(values: &[f64]) -> [f64; 5] {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    [0.0, 0.25, 0.5, 0.75, 1.0].map(|p| quantile(&v, p))
}

fn sequence_row(kind: &'static str, source: &str, label: String, x: &ComplexSeq) -> Row {
    let m = sidelobe_metrics(x);
    Row {
        kind,
        source: source.to_owned(),
        n: x.len(),
        label,
        psl: m.psl,
        isl: m.isl,
        verified: Some(verify_cazac(x, STATS_VERIFY_TOL).pass),
    }
}

/// Named-family rows for length `n`: Zadoff-Chu (odd `n`) or P4 (even `n`),
/// plus Björck when `n` is an odd prime.
pub fn reference_rows(n: usize) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    let (name, spec) =
        if n % 2 == 1 { ("zadoff-chu", QuadraticPhaseSpec::zadoff_chu(n)) } else { ("p4", QuadraticPhaseSpec::p4(n)) };
    let x = families::quadratic_phase(&spec)?.into_inner();
    rows.push(sequence_row("reference", name, name.into(), &x));
    if n > 2 && families::is_prime(n as i64) {
        let x = families::bjorck(n as i64)?.into_inner();
        rows.push(sequence_row("reference", "bjorck", "bjorck".into(), &x));
    }
    Ok(rows)
}

pub fn build(sources: &[(String, Vec<ComplexSeq>)], references: bool) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    let mut sequence_rows = 0;
    let mut lengths = BTreeSet::new();
    for (source, seqs) in sources {
        let start = rows.len();
        for (i, x) in seqs.iter().enumerate() {
            rows.push(sequence_row("sequence", source, (i + 1).to_string(), x));
            lengths.insert(x.len());
        }
        sequence_rows += seqs.len();
        if seqs.is_empty() {
            continue;
        }
        let psl: Vec<f64> = rows[start..].iter().map(|r| r.psl).collect();
        let isl: Vec<f64> = rows[start..].iter().map(|r| r.isl).collect();
        let n = seqs[0].len();
        for ((label, p), i) in
            ["min", "q1", "median", "q3", "max"].into_iter().zip(five_numbers(&psl)).zip(five_numbers(&isl))
        {
            rows.push(Row {
                kind: "summary",
                source: source.clone(),
                n,
                label: label.into(),
                psl: p,
                isl: i,
                verified: None,
            });
        }
    }
    if references {
        for n in lengths {
            rows.extend(reference_rows(n)?);
        }
    }
    Ok(Table { rows, sequence_rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        assert_eq!(five_numbers(&[3.0, 1.0, 2.0, 4.0, 5.0]), [1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(five_numbers(&[1.0, 2.0]), [1.0, 1.25, 1.5, 1.75, 2.0]);
        assert_eq!(five_numbers(&[7.0]), [7.0; 5]);
    }

    #[test]
    fn barker_like_row() {
        let x = ComplexSeq::from_re_im(&[(1., 0.), (1., 0.), (1., 0.), (-1., 0.)]).unwrap();
        let t = build(&[("b.txt".into(), vec![x])], false).unwrap();
        assert_eq!(t.rows[0].psl, 0.25);
        assert_eq!(t.rows[0].isl, 0.125);
        assert_eq!(t.rows[0].verified, Some(true));
        assert_eq!(t.rows.len(), 6);
        assert!(t.to_csv().contains("sequence,b.txt,4,1,2.500000000e-1,1.250000000e-1,true\n"));
    }

    #[test]
    fn empty_input_gives_header_only() {
        let t = build(&[("e.txt".into(), vec![])], true).unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(t.to_csv(), format!("{HEADER}\n"));
    }

    #[test]
    fn prime_lengths_get_two_references() {
        let rows = reference_rows(11).unwrap();
        let names: Vec<&str> = rows.iter().map(|r| r.source.as_str()).collect();
        assert_eq!(names, ["zadoff-chu", "bjorck"]);
        assert!(rows.iter().all(|r| r.verified == Some(true)));
        assert_eq!(reference_rows(10).unwrap().len(), 1);
    }
}
