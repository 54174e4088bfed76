//! Resolved command configurations and their pure execution.
//!
//! `execute` never touches the output directory: it returns the output files
//! as bytes, so the caller can digest, write, or compare them.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cazac::correlate::{ambiguity, GridKind, Method};
use cazac::equiv;
use cazac::families::{self, QuadraticPhaseSpec};
use cazac::format::{format_grid, format_record, format_sequences, parse_sequences};
use cazac::search::{self, finiteness_verdict, SearchPlan, VerdictConfig};
use cazac::{verify_cazac, ComplexSeq};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::report::SearchSummary;
use crate::stats;

/// Tolerance for the verification line written by `generate`.
pub const GENERATE_VERIFY_TOL: f64 = 1e-12;

/// Inputs to `orbit` must pass this check.
pub const ORBIT_INPUT_TOL: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, malformed input, or a violated constraint (exit 2).
    Input(String),
    /// Unreadable input or unwritable output (exit 3).
    Io(String),
    /// A replay produced different outputs (exit 4).
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) | CliError::Mismatch(m) => f.write_str(m),
        }
    }
}

impl From<cazac::Error> for CliError {
    fn from(e: cazac::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ZadoffChu,
    P4,
    Wiener,
    Bjorck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum CommandConfig {
    Generate { family: Family, n: usize, k: Option<i64> },
    Search { plan: SearchPlan, verdict: VerdictConfig },
    Stats { inputs: Vec<PathBuf>, references: bool },
    Ambiguity { input: PathBuf, kind: GridKind },
    Orbit { input: PathBuf, max_word_len: usize },
    Filter { input: PathBuf, n: usize },
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Generate { .. } => "generate",
            CommandConfig::Search { .. } => "search",
            CommandConfig::Stats { .. } => "stats",
            CommandConfig::Ambiguity { .. } => "ambiguity",
            CommandConfig::Orbit { .. } => "orbit",
            CommandConfig::Filter { .. } => "filter",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            CommandConfig::Search { plan, .. } => Some(plan.seed),
            _ => None,
        }
    }

    pub fn inputs(&self) -> Vec<PathBuf> {
        match self {
            CommandConfig::Stats { inputs, .. } => inputs.clone(),
            CommandConfig::Ambiguity { input, .. }
            | CommandConfig::Orbit { input, .. }
            | CommandConfig::Filter { input, .. } => vec![input.clone()],
            CommandConfig::Generate { .. } | CommandConfig::Search { .. } => Vec::new(),
        }
    }
}

pub struct Outcome {
    /// Output files by name, in a fixed order.
    pub files: Vec<(String, Vec<u8>)>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn read_sequences(path: &Path) -> Result<Vec<ComplexSeq>, CliError> {
    parse_sequences(&read_input(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn family_sequence(family: Family, n: usize, k: Option<i64>) -> Result<ComplexSeq, CliError> {
    if k.is_some() && family != Family::Wiener {
        return Err(CliError::Input("--k applies only to the wiener family".into()));
    }
    let seq = match family {
        Family::ZadoffChu => families::quadratic_phase(&QuadraticPhaseSpec::zadoff_chu(n))?,
        Family::P4 => families::quadratic_phase(&QuadraticPhaseSpec::p4(n))?,
        Family::Wiener => families::quadratic_phase(&QuadraticPhaseSpec::wiener(n, k.unwrap_or(1)))?,
        Family::Bjorck => families::bjorck(n as i64)?,
    };
    Ok(seq.into_inner())
}

pub fn execute(config: &CommandConfig) -> Result<Outcome, CliError> {
    match config {
        CommandConfig::Generate { family, n, k } => generate(*family, *n, *k),
        CommandConfig::Search { plan, verdict } => run_search(plan, verdict),
        CommandConfig::Stats { inputs, references } => {
            let mut sources = Vec::with_capacity(inputs.len());
            for path in inputs {
                sources.push((source_label(path), read_sequences(path)?));
            }
            let table = stats::build(&sources, *references)?;
            let summary = vec![format!("{} sequences, {} rows", table.sequence_rows, table.rows.len())];
            Ok(Outcome { files: vec![("stats.csv".into(), table.to_csv().into_bytes())], summary })
        }
        CommandConfig::Ambiguity { input, kind } => {
            let seqs = read_sequences(input)?;
            let [x] = seqs.as_slice() else {
                return Err(CliError::Input(format!("expected exactly one sequence, found {}", seqs.len())));
            };
            let grid = ambiguity(x, *kind, Method::Fft);
            let summary = vec![
                format!("n={} kind={}", grid.n(), kind.as_str()),
                format!("max off-origin normalized magnitude: {:.9e}", grid.max_off_origin()),
            ];
            Ok(Outcome { files: vec![("grid.txt".into(), format_grid(&grid).into_bytes())], summary })
        }
        CommandConfig::Orbit { input, max_word_len } => {
            let bases = read_sequences(input)?;
            if bases.is_empty() {
                return Err(CliError::Input("no sequences in input".into()));
            }
            for (i, x) in bases.iter().enumerate() {
                let v = verify_cazac(x, ORBIT_INPUT_TOL);
                if !v.pass {
                    return Err(CliError::Input(format!(
                        "sequence {} is not CAZAC at tolerance {ORBIT_INPUT_TOL:e} \
                         (max modulus error {:e}, max autocorrelation {:e})",
                        i + 1,
                        v.max_modulus_error,
                        v.max_autocorrelation
                    )));
                }
            }
            let report = equiv::orbit_of_set(&bases, *max_word_len)?;
            let header = vec![format!(
                "orbit of {} base sequence(s): {} members, fixpoint reached: {}",
                bases.len(),
                report.count(),
                report.reached_fixpoint
            )];
            let text = format_sequences(&header, report.members.values().map(|m| &m.sequence));
            let summary = vec![
                format!("orbit size: {}", report.count()),
                format!("fixpoint reached: {} after {} sweeps", report.reached_fixpoint, report.sweeps),
            ];
            Ok(Outcome { files: vec![("orbit.txt".into(), text.into_bytes())], summary })
        }
        CommandConfig::Filter { input, n } => filter(input, *n),
    }
}

/// File name used to label rows from `path`.
fn source_label(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn generate(family: Family, n: usize, k: Option<i64>) -> Result<Outcome, CliError> {
    let x = family_sequence(family, n, k)?;
    let v = verify_cazac(&x, GENERATE_VERIFY_TOL);
    let family_name = family.to_possible_value().map(|p| p.get_name().to_owned()).unwrap_or_default();
    let params = match k {
        Some(k) => format!("family={family_name} n={n} k={k}"),
        None => format!("family={family_name} n={n}"),
    };
    let verification = format!(
        "verification: max_modulus_error={:e} max_autocorrelation={:e} tol={GENERATE_VERIFY_TOL:e} pass={}",
        v.max_modulus_error, v.max_autocorrelation, v.pass
    );
    let text = format_sequences(&[params.clone(), verification.clone()], [&x]);
    Ok(Outcome { files: vec![("sequence.txt".into(), text.into_bytes())], summary: vec![params, verification] })
}

fn run_search(plan: &SearchPlan, verdict_cfg: &VerdictConfig) -> Result<Outcome, CliError> {
    let report = search::run_search(plan)?;
    let verdict = finiteness_verdict(&report, verdict_cfg);
    let summary_json = SearchSummary::new(plan, &report, verdict.as_ref().ok(), verdict.as_ref().err());
    let mut json = serde_json::to_string_pretty(&summary_json).expect("report serializes");
    json.push('\n');

    let header =
        vec![format!("n={} seed={} trials={} unique={}", plan.n, plan.seed, report.trials_run, report.unique_count())];
    let solutions = format_sequences(&header, report.solutions.iter().map(|(_, s)| s));

    let mut summary = vec![
        format!("trials run: {}", report.trials_run),
        format!("converged: {} (rejected {})", report.converged, report.rejected),
        format!("non-converged: {} (near misses {})", report.non_converged, report.near_misses),
        format!("unique solutions: {}", report.unique_count()),
    ];
    if let Some(c) = report.max_accepted_cost {
        summary.push(format!("max accepted cost: {c:e}"));
    }
    match &verdict {
        Ok(v) => summary.push(format!(
            "verdict: {} (tail rate {:.4}, head rate {:.4})",
            summary_json.verdict_name().unwrap_or("?"),
            v.tail_rate,
            v.head_rate
        )),
        Err(e) => summary.push(format!("verdict: none ({e})")),
    }
    Ok(Outcome {
        files: vec![("solutions.txt".into(), solutions.into_bytes()), ("report.json".into(), json.into_bytes())],
        summary,
    })
}

fn filter(input: &Path, n: usize) -> Result<Outcome, CliError> {
    let seqs = read_sequences(input)?;
    let split = search::filter_known(&seqs, n)?;
    let mut known = format!("# known: {} of {}\n", split.known.len(), seqs.len());
    for l in &split.known {
        writeln!(known, "# provenance: {}", l.provenance).expect("writing to String");
        known.push_str(&format_record(&l.sequence));
        known.push('\n');
    }
    let new = format_sequences(&[format!("new: {} of {}", split.new.len(), seqs.len())], &split.new);
    let summary = vec![format!("known: {}", split.known.len()), format!("new: {}", split.new.len())];
    Ok(Outcome { files: vec![("known.txt".into(), known.into_bytes()), ("new.txt".into(), new.into_bytes())], summary })
}
