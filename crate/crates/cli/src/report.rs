//! JSON search report. Wall-clock time is deliberately absent so that the
//! report is a pure function of the plan; it lives in the run manifest.

use std::collections::BTreeMap;

use cazac::search::{Finiteness, FinitenessVerdict, GrowthPoint, SearchPlan, SearchReport};
use cazac::solver::{SolverConfig, Termination};
use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct SearchSummary {
    pub schema_version: u32,
    pub n: usize,
    pub seed: u64,
    pub trials_requested: usize,
    pub trials_run: usize,
    pub target_solutions: Option<usize>,
    pub converged: usize,
    pub non_converged: usize,
    pub rejected: usize,
    pub solver_failures: usize,
    pub unique: usize,
    pub max_accepted_cost: Option<f64>,
    pub min_accepted_cost: Option<f64>,
    pub near_misses: usize,
    /// Non-converged runs by `floor(log10(final cost))`.
    pub stall_histogram: BTreeMap<String, usize>,
    pub terminations: BTreeMap<Termination, usize>,
    pub growth_curve: Vec<GrowthPoint>,
    pub solver: SolverConfig,
    pub verdict: Option<VerdictSummary>,
    pub verdict_error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerdictSummary {
    pub verdict: Finiteness,
    pub unique_ratio: f64,
    pub tail_start: usize,
    pub tail_new: usize,
    pub tail_rate: f64,
    pub head_rate: f64,
    pub tail_fraction: f64,
    pub finite_unique_ratio: f64,
    pub infinite_tail_rate: f64,
    pub sustained_growth_ratio: f64,
    pub min_trials: usize,
}

impl SearchSummary {
    pub fn new(
        plan: &SearchPlan,
        report: &SearchReport,
        verdict: Option<&FinitenessVerdict>,
        verdict_error: Option<&cazac::Error>,
    ) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            n: report.n,
            seed: report.seed,
            trials_requested: report.trials_requested,
            trials_run: report.trials_run,
            target_solutions: plan.target_solutions,
            converged: report.converged,
            non_converged: report.non_converged,
            rejected: report.rejected,
            solver_failures: report.solver_failures,
            unique: report.unique_count(),
            max_accepted_cost: report.max_accepted_cost,
            min_accepted_cost: report.min_accepted_cost,
            near_misses: report.near_misses,
            stall_histogram: report
                .stall_histogram
                .iter()
                .map(|(decade, count)| (format!("1e{decade}"), *count))
                .collect(),
            terminations: report.terminations.clone(),
            growth_curve: report.growth_curve.clone(),
            solver: plan.solver,
            verdict: verdict.map(|v| VerdictSummary {
                verdict: v.verdict,
                unique_ratio: v.unique_ratio,
                tail_start: v.tail_start,
                tail_new: v.tail_new,
                tail_rate: v.tail_rate,
                head_rate: v.head_rate,
                tail_fraction: v.thresholds.tail_fraction,
                finite_unique_ratio: v.thresholds.finite_unique_ratio,
                infinite_tail_rate: v.thresholds.infinite_tail_rate,
                sustained_growth_ratio: v.thresholds.sustained_growth_ratio,
                min_trials: v.thresholds.min_trials,
            }),
            verdict_error: verdict_error.map(|e| e.to_string()),
        }
    }

    pub fn verdict_name(&self) -> Option<&'static str> {
        self.verdict.as_ref().map(|v| match v.verdict {
            Finiteness::LikelyFinite => "likely-finite",
            Finiteness::LikelyInfinite => "likely-infinite",
            Finiteness::Inconclusive => "inconclusive",
        })
    }
}
