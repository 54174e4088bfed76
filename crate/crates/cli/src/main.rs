//! `cazac`: generate, search for, and analyze CAZAC sequences.
//!
//! Every command writes its outputs plus a `manifest.json` into `--out-dir`.
//! `cazac replay <manifest>` reruns the recorded configuration and checks
//! the outputs byte for byte.
//!
//! Exit codes: 0 success, 2 input or constraint error, 3 I/O error,
//! 4 replay mismatch.

mod commands;
mod manifest;
mod report;
mod stats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cazac::correlate::GridKind;
use cazac::equiv::DEFAULT_MAX_WORD_LEN;
use cazac::search::{even_checkpoints, SearchPlan, VerdictConfig};
use cazac::solver::SolverConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{execute, CliError, CommandConfig, Family};
use manifest::{digest_file, digest_outputs, RunManifest, MANIFEST_NAME, MANIFEST_SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "cazac", version, about = "Search for and analyze CAZAC sequences")]
struct Cli {
    /// Worker threads; affects wall time only, never output content.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named-family sequence with a verification line.
    Generate {
        family: Family,
        n: usize,
        /// Wiener parameter (default 1).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Multi-start Levenberg-Marquardt search for length-n CAZAC sequences.
    Search(SearchArgs),
    /// PSL/ISL per sequence with five-number summaries.
    Stats {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Append Zadoff-Chu (or P4) and Björck rows for every length seen.
        #[arg(long)]
        references: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Normalized ambiguity magnitudes of a single sequence.
    Ambiguity {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Periodic)]
        kind: KindArg,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Closure of CAZAC sequences under translation, modulation, decimation
    /// and conjugation.
    Orbit {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_WORD_LEN)]
        max_word_len: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Split solutions into members of known family orbits and the rest.
    Filter {
        input: PathBuf,
        /// Sequence length (default: length of the first record).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Rerun a manifest and compare output digests.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct SearchArgs {
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Master seed; required so that every run is reproducible.
    #[arg(long)]
    seed: u64,
    /// Stop once this many unique solutions are found.
    #[arg(long)]
    target_solutions: Option<usize>,
    /// Number of evenly spaced growth-curve checkpoints.
    #[arg(long, default_value_t = 20)]
    checkpoints: usize,
    #[arg(long)]
    gradient_tol: Option<f64>,
    #[arg(long)]
    step_tol: Option<f64>,
    #[arg(long)]
    cost_tol: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    acceptance_cost: Option<f64>,
    /// Fraction of trials forming the verdict's tail window.
    #[arg(long)]
    tail_fraction: Option<f64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Periodic,
    Aperiodic,
}

impl From<KindArg> for GridKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Periodic => GridKind::Periodic,
            KindArg::Aperiodic => GridKind::Aperiodic,
        }
    }
}

fn absolute(path: &Path) -> Result<PathBuf, CliError> {
    std::path::absolute(path).map_err(|e| CliError::Io(format!("cannot resolve {}: {e}", path.display())))
}

fn search_config(a: SearchArgs) -> CommandConfig {
    let d = SolverConfig::default();
    let solver = SolverConfig {
        gradient_tol: a.gradient_tol.unwrap_or(d.gradient_tol),
        step_tol: a.step_tol.unwrap_or(d.step_tol),
        cost_tol: a.cost_tol.unwrap_or(d.cost_tol),
        max_iterations: a.max_iterations.unwrap_or(d.max_iterations),
        acceptance_cost: a.acceptance_cost.unwrap_or(d.acceptance_cost),
        ..d
    };
    let plan = SearchPlan {
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        solver,
        checkpoints: even_checkpoints(a.trials, a.checkpoints),
        target_solutions: a.target_solutions,
    };
    let dv = VerdictConfig::default();
    let verdict = VerdictConfig { tail_fraction: a.tail_fraction.unwrap_or(dv.tail_fraction), ..dv };
    CommandConfig::Search { plan, verdict }
}

/// Resolves CLI arguments into a self-contained configuration and output
/// directory, or `None` for `replay`.
fn resolve(command: Command) -> Result<Option<(CommandConfig, PathBuf)>, CliError> {
    let resolved = match command {
        Command::Generate { family, n, k, out_dir } => (CommandConfig::Generate { family, n, k }, out_dir),
        Command::Search(args) => {
            let out_dir = args.out_dir.clone();
            (search_config(args), out_dir)
        }
        Command::Stats { inputs, references, out_dir } => {
            let inputs = inputs.iter().map(|p| absolute(p)).collect::<Result<_, _>>()?;
            (CommandConfig::Stats { inputs, references }, out_dir)
        }
        Command::Ambiguity { input, kind, out_dir } => {
            (CommandConfig::Ambiguity { input: absolute(&input)?, kind: kind.into() }, out_dir)
        }
        Command::Orbit { input, max_word_len, out_dir } => {
            (CommandConfig::Orbit { input: absolute(&input)?, max_word_len }, out_dir)
        }
        Command::Filter { input, n, out_dir } => {
            let input = absolute(&input)?;
            let n = match n {
                Some(n) => n,
                None => commands::read_sequences(&input)?
                    .first()
                    .map(|s| s.len())
                    .ok_or_else(|| CliError::Input("empty input: pass --n".into()))?,
            };
            (CommandConfig::Filter { input, n }, out_dir)
        }
        Command::Replay { .. } => return Ok(None),
    };
    Ok(Some(resolved))
}

fn write_outputs(out_dir: &Path, files: &[(String, Vec<u8>)], manifest: &RunManifest) -> Result<(), CliError> {
    let io = |p: &Path, e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", p.display()));
    std::fs::create_dir_all(out_dir).map_err(|e| io(out_dir, e))?;
    for (name, bytes) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| io(&path, e))?;
    }
    let path = out_dir.join(MANIFEST_NAME);
    std::fs::write(&path, manifest.to_json()).map_err(|e| io(&path, e))
}

/// Executes `config`, writes its outputs and manifest, and returns the manifest.
fn run(config: CommandConfig, out_dir: &Path, workers: usize) -> Result<RunManifest, CliError> {
    let inputs = config.inputs().iter().map(|p| digest_file(p)).collect::<Result<Vec<_>, _>>()?;
    let clock = Instant::now();
    let outcome = execute(&config)?;
    let manifest = RunManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").into(),
        command: config.name().into(),
        seed: config.seed(),
        config,
        inputs,
        outputs: digest_outputs(&outcome.files),
        workers,
        elapsed_seconds: clock.elapsed().as_secs_f64(),
    };
    write_outputs(out_dir, &outcome.files, &manifest)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &manifest.outputs {
        println!("wrote {}", out_dir.join(&f.path).display());
    }
    Ok(manifest)
}

fn replay(manifest_path: &Path, out_dir: &Path, workers: usize) -> Result<(), CliError> {
    let recorded = RunManifest::load(manifest_path)?;
    for input in &recorded.inputs {
        let now = digest_file(Path::new(&input.path))?;
        if now.sha256 != input.sha256 {
            return Err(CliError::Input(format!("input {} changed since the recorded run", input.path)));
        }
    }
    let fresh = run(recorded.config.clone(), out_dir, workers)?;
    let differing: Vec<&str> =
        recorded.outputs.iter().filter(|o| !fresh.outputs.contains(o)).map(|o| o.path.as_str()).collect();
    if !differing.is_empty() || fresh.outputs.len() != recorded.outputs.len() {
        return Err(CliError::Mismatch(format!("replay outputs differ: {}", differing.join(", "))));
    }
    println!("replay matches: {} output file(s) identical", fresh.outputs.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {workers} workers: {e}");
            return ExitCode::from(3);
        }
    };
    let result = pool.install(|| match cli.command {
        Command::Replay { manifest, out_dir } => replay(&manifest, &out_dir, workers),
        command => match resolve(command) {
            Ok(Some((config, out_dir))) => run(config, &out_dir, workers).map(|_| ()),
            Ok(None) => unreachable!("replay handled above"),
            Err(e) => Err(e),
        },
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
