//! Randomized multi-start search for CAZAC sequences.
//!
//! Trial `i` starts from a point drawn uniformly from `[-1, 1]^{2n}` using a
//! ChaCha stream selected by `(seed, i)`, so every trial is reproducible in
//! isolation. Trials run in fixed-size batches on the current rayon pool and
//! are merged strictly in trial order; a report therefore depends only on the
//! plan, never on the number of workers.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equiv;
use crate::error::{Error, Result};
use crate::families::{self, QuadraticPhaseSpec};
use crate::residual::ResidualSystem;
use crate::seq::{canonicalize, key_of, lift, verify_cazac, CanonicalKey, ComplexSeq, RealEmbedding};
use crate::solver::{self, SolverConfig, Termination};

/// Tolerance for the post-solve CAZAC check of accepted points.
pub const SOLUTION_VERIFY_TOL: f64 = 1e-8;

/// Non-converged outcomes below this cost are logged as near misses.
pub const NEAR_MISS_COST: f64 = 1e-8;

const BATCH: usize = 1024;
const POLISH_ITERATIONS: usize = 20;
const DEFAULT_CHECKPOINTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchPlan {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverConfig,
    /// Trial counts at which the unique-solution count is recorded.
    pub checkpoints: Vec<usize>,
    /// Stop after the shortest prefix of trials yielding this many unique
    /// solutions.
    pub target_solutions: Option<usize>,
}

impl SearchPlan {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            seed,
            solver: SolverConfig::default(),
            checkpoints: even_checkpoints(trials, DEFAULT_CHECKPOINTS),
            target_solutions: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidPlan(format!("n must be at least 2, got {}", self.n)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidPlan("trials must be at least 1".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPlan("checkpoints must be strictly ascending".into()));
        }
        if let Some(&last) = self.checkpoints.last() {
            if last > self.trials {
                return Err(Error::InvalidPlan(format!("checkpoint {last} exceeds trials {}", self.trials)));
            }
        }
        if self.checkpoints.first() == Some(&0) {
            return Err(Error::InvalidPlan("checkpoints must be positive".into()));
        }
        if self.target_solutions == Some(0) {
            return Err(Error::InvalidPlan("target_solutions must be positive".into()));
        }
        self.solver.validate()
    }
}

/// `count` evenly spaced checkpoints ending at `trials`.
pub fn even_checkpoints(trials: usize, count: usize) -> Vec<usize> {
    let count = count.max(1);
    let mut out: Vec<usize> = (1..=count).map(|i| trials * i / count).filter(|&c| c > 0).collect();
    out.dedup();
    out
}

/// Uniform start in `[-1, 1]^{2n}` for trial `index`.
pub fn trial_start(seed: u64, n: usize, index: u64) -> RealEmbedding {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let values = (0..2 * n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    RealEmbedding::from_flat(values).expect("2n > 0")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub trials: usize,
    pub unique: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub n: usize,
    pub seed: u64,
    pub trials_requested: usize,
    pub trials_run: usize,
    pub converged: usize,
    pub non_converged: usize,
    /// Converged by cost but failing canonicalization or verification.
    pub rejected: usize,
    /// Trials whose normal equations stayed singular.
    pub solver_failures: usize,
    /// Deduplicated canonical solutions, sorted by key.
    pub solutions: Vec<(CanonicalKey, ComplexSeq)>,
    pub max_accepted_cost: Option<f64>,
    pub min_accepted_cost: Option<f64>,
    /// Non-converged outcomes with cost in `[acceptance_cost, NEAR_MISS_COST)`.
    pub near_misses: usize,
    /// Non-converged final costs by decade (`floor(log10 cost)`).
    pub stall_histogram: BTreeMap<i32, usize>,
    pub terminations: BTreeMap<Termination, usize>,
    pub growth_curve: Vec<GrowthPoint>,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn unique_count(&self) -> usize {
        self.solutions.len()
    }

    pub fn sequences(&self) -> Vec<ComplexSeq> {
        self.solutions.iter().map(|(_, s)| s.clone()).collect()
    }
}

enum TrialResult {
    Accepted { cost: f64, termination: Termination, solution: ComplexSeq },
    Rejected { termination: Termination },
    Stalled { cost: f64, termination: Termination },
    Failed,
}

fn run_trial(plan: &SearchPlan, system: &ResidualSystem, index: usize) -> TrialResult {
    let start = trial_start(plan.seed, plan.n, index as u64);
    let outcome = match solver::minimize(system, &start, &plan.solver) {
        Ok(o) => o,
        Err(_) => return TrialResult::Failed,
    };
    let (cost, termination) = (outcome.cost, outcome.termination);
    if !outcome.converged {
        return TrialResult::Stalled { cost, termination };
    }
    let (point, cost) = polish(system, outcome.point, cost, &plan.solver);
    match canonicalize(&lift(&point)) {
        Ok(solution) if verify_cazac(&solution, SOLUTION_VERIFY_TOL).pass => {
            TrialResult::Accepted { cost, termination, solution }
        }
        _ => TrialResult::Rejected { termination },
    }
}

/// Continues from an accepted point with the gradient stop disabled, so the
/// iterate lands on the floating-point floor (quadratic convergence makes
/// this one or two steps). Points stopped by the gradient test still carry
/// ~1e-11 coordinate error, enough to straddle an eight-decimal key boundary
/// and split one solution into two keys.
fn polish(system: &ResidualSystem, point: RealEmbedding, cost: f64, cfg: &SolverConfig) -> (RealEmbedding, f64) {
    let refine = SolverConfig { gradient_tol: f64::MIN_POSITIVE, max_iterations: POLISH_ITERATIONS, ..*cfg };
    match solver::minimize(system, &point, &refine) {
        Ok(o) if o.cost <= cost => (o.point, o.cost),
        _ => (point, cost),
    }
}

/// Runs the plan on the current rayon pool.
pub fn run_search(plan: &SearchPlan) -> Result<SearchReport> {
    plan.validate()?;
    let clock = Instant::now();
    let system = ResidualSystem::new(plan.n);
    let mut report = SearchReport {
        n: plan.n,
        seed: plan.seed,
        trials_requested: plan.trials,
        trials_run: 0,
        converged: 0,
        non_converged: 0,
        rejected: 0,
        solver_failures: 0,
        solutions: Vec::new(),
        max_accepted_cost: None,
        min_accepted_cost: None,
        near_misses: 0,
        stall_histogram: BTreeMap::new(),
        terminations: BTreeMap::new(),
        growth_curve: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let mut unique: BTreeMap<CanonicalKey, ComplexSeq> = BTreeMap::new();
    let mut checkpoints = plan.checkpoints.iter().copied().peekable();

    'batches: for batch_start in (0..plan.trials).step_by(BATCH) {
        let batch_end = (batch_start + BATCH).min(plan.trials);
        let results: Vec<TrialResult> =
            (batch_start..batch_end).into_par_iter().map(|i| run_trial(plan, &system, i)).collect();

        for (offset, result) in results.into_iter().enumerate() {
            report.trials_run = batch_start + offset + 1;
            match result {
                TrialResult::Accepted { cost, termination, solution } => {
                    report.converged += 1;
                    *report.terminations.entry(termination).or_default() += 1;
                    report.max_accepted_cost = Some(report.max_accepted_cost.map_or(cost, |c| c.max(cost)));
                    report.min_accepted_cost = Some(report.min_accepted_cost.map_or(cost, |c| c.min(cost)));
                    unique.entry(key_of(&solution)).or_insert(solution);
                }
                TrialResult::Rejected { termination, .. } => {
                    report.converged += 1;
                    report.rejected += 1;
                    *report.terminations.entry(termination).or_default() += 1;
                }
                TrialResult::Stalled { cost, termination } => {
                    report.non_converged += 1;
                    *report.terminations.entry(termination).or_default() += 1;
                    if cost < NEAR_MISS_COST {
                        report.near_misses += 1;
                    }
                    let decade = if cost > 0.0 { cost.log10().floor() as i32 } else { i32::MIN };
                    *report.stall_histogram.entry(decade).or_default() += 1;
                }
                TrialResult::Failed => {
                    report.non_converged += 1;
                    report.solver_failures += 1;
                }
            }
            while checkpoints.peek() == Some(&report.trials_run) {
                checkpoints.next();
                report.growth_curve.push(GrowthPoint { trials: report.trials_run, unique: unique.len() });
            }
            if plan.target_solutions.is_some_and(|t| unique.len() >= t) {
                break 'batches;
            }
        }
    }

    if report.growth_curve.last().map(|g| g.trials) != Some(report.trials_run) {
        report.growth_curve.push(GrowthPoint { trials: report.trials_run, unique: unique.len() });
    }
    report.solutions = unique.into_iter().collect();
    report.elapsed = clock.elapsed();
    Ok(report)
}

/// Runs the plan on a dedicated pool with `workers` threads.
pub fn run_search_with_workers(plan: &SearchPlan, workers: usize) -> Result<SearchReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidPlan(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_search(plan))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Finiteness {
    LikelyFinite,
    LikelyInfinite,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictConfig {
    /// Share of trials, counted from the end, that forms the tail window.
    pub tail_fraction: f64,
    /// `unique / trials` must stay below this for a finite verdict.
    pub finite_unique_ratio: f64,
    /// New keys per tail trial above which the set is deemed infinite.
    pub infinite_tail_rate: f64,
    /// Also deemed infinite when the tail rate is at least this fraction of
    /// the average rate before the tail, i.e. growth has not slowed down.
    pub sustained_growth_ratio: f64,
    pub min_trials: usize,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self {
            tail_fraction: 0.25,
            finite_unique_ratio: 0.5,
            infinite_tail_rate: 0.5,
            sustained_growth_ratio: 0.5,
            min_trials: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitenessVerdict {
    pub verdict: Finiteness,
    pub unique: usize,
    pub trials: usize,
    pub unique_ratio: f64,
    /// First trial count of the tail window (a recorded checkpoint, or 0).
    pub tail_start: usize,
    pub tail_new: usize,
    pub tail_rate: f64,
    /// Average new keys per trial before the tail window.
    pub head_rate: f64,
    pub thresholds: VerdictConfig,
}

pub fn finiteness_verdict(report: &SearchReport, cfg: &VerdictConfig) -> Result<FinitenessVerdict> {
    if report.trials_run < cfg.min_trials {
        return Err(Error::InsufficientData(format!(
            "{} trials, at least {} required",
            report.trials_run, cfg.min_trials
        )));
    }
    if report.growth_curve.len() < 2 {
        return Err(Error::InsufficientData("growth curve needs at least two checkpoints".into()));
    }
    let last = *report.growth_curve.last().expect("nonempty");
    let tail_len = (cfg.tail_fraction * last.trials as f64).ceil() as usize;
    let boundary = last.trials.saturating_sub(tail_len);
    let start = report
        .growth_curve
        .iter()
        .rev()
        .find(|g| g.trials <= boundary)
        .copied()
        .unwrap_or(GrowthPoint { trials: 0, unique: 0 });

    let tail_new = last.unique - start.unique;
    let tail_rate = tail_new as f64 / (last.trials - start.trials).max(1) as f64;
    let head_rate = if start.trials > 0 { start.unique as f64 / start.trials as f64 } else { 0.0 };
    let unique_ratio = last.unique as f64 / last.trials as f64;
    let sustained = tail_new > 0 && start.trials > 0 && tail_rate >= cfg.sustained_growth_ratio * head_rate;
    let verdict = if tail_new == 0 && unique_ratio < cfg.finite_unique_ratio {
        Finiteness::LikelyFinite
    } else if tail_rate > cfg.infinite_tail_rate || sustained {
        Finiteness::LikelyInfinite
    } else {
        Finiteness::Inconclusive
    };
    Ok(FinitenessVerdict {
        verdict,
        unique: last.unique,
        trials: last.trials,
        unique_ratio,
        tail_start: start.trials,
        tail_new,
        tail_rate,
        head_rate,
        thresholds: *cfg,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelledSequence {
    pub sequence: ComplexSeq,
    /// Family whose orbit contains the sequence (`bjorck` or `wiener`).
    pub provenance: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KnownPartition {
    pub known: Vec<LabelledSequence>,
    pub new: Vec<ComplexSeq>,
}

/// Orbit key sets of the known families for length `n`: Björck (prime `n`)
/// and every valid Wiener parameter.
pub fn known_orbits(n: usize) -> Result<Vec<(&'static str, equiv::OrbitReport)>> {
    let mut out = Vec::new();
    if n > 2 && families::is_prime(n as i64) {
        let b = families::bjorck(n as i64)?.into_inner();
        out.push(("bjorck", equiv::orbit(&b, equiv::DEFAULT_MAX_WORD_LEN)?));
    }
    let wieners = families::wiener_parameters(n)
        .into_iter()
        .map(|k| families::quadratic_phase(&QuadraticPhaseSpec::wiener(n, k)).map(|u| u.into_inner()))
        .collect::<Result<Vec<_>>>()?;
    out.push(("wiener", equiv::orbit_of_set(&wieners, equiv::DEFAULT_MAX_WORD_LEN)?));
    Ok(out)
}

/// Splits `solutions` into members of the known family orbits and the rest.
pub fn filter_known(solutions: &[ComplexSeq], n: usize) -> Result<KnownPartition> {
    let orbits = known_orbits(n)?;
    let mut partition = KnownPartition { known: Vec::new(), new: Vec::new() };
    for s in solutions {
        if s.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: s.len() });
        }
        let key = key_of(s);
        match orbits.iter().find(|(_, orbit)| orbit.contains(&key)) {
            Some((label, _)) => partition.known.push(LabelledSequence { sequence: s.clone(), provenance: label }),
            None => partition.new.push(s.clone()),
        }
    }
    Ok(partition)
}
