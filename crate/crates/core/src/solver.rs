//! Dense Levenberg-Marquardt with Marquardt's diagonal scaling.
//!
//! Each iteration solves `(JᵀJ + λ·diag(JᵀJ)) δ = -Jᵀr` by Cholesky, accepts
//! the step only if it lowers `Σ r²`, and rescales `λ` by the configured
//! factors. A failed factorization raises `λ` and retries.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::RealEmbedding;

/// Residuals and Jacobian of a least-squares problem over flat `f64` slices.
pub trait LeastSquaresProblem {
    fn variable_count(&self) -> usize;
    fn residual_count(&self) -> usize;
    fn residuals(&self, x: &[f64], out: &mut [f64]);
    /// Row-major `residual_count × variable_count`.
    fn jacobian(&self, x: &[f64], out: &mut [f64]);
}

/// Factorization retries (each raising `λ`) before giving up.
pub const MAX_FACTORIZATION_RETRIES: usize = 20;

const MIN_DAMPING: f64 = 1e-12;
const MAX_DAMPING: f64 = 1e16;
// Floor for diag(JᵀJ) entries so that zero Jacobian columns are still damped.
const DIAG_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Absolute bound on `‖Jᵀr‖∞`.
    pub gradient_tol: f64,
    /// Relative step test `‖δ‖ ≤ tol·(tol + ‖x‖)`.
    pub step_tol: f64,
    /// Relative cost-decrease test; `cost_tol·ε` also serves as an absolute
    /// floor below which the point is taken as an exact root.
    pub cost_tol: f64,
    pub max_iterations: usize,
    pub initial_damping: f64,
    pub damping_increase: f64,
    pub damping_decrease: f64,
    /// Final cost below which an outcome counts as converged.
    pub acceptance_cost: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gradient_tol: 1e-12,
            step_tol: 1e-12,
            cost_tol: 1e-12,
            max_iterations: 2000,
            initial_damping: 1e-3,
            damping_increase: 10.0,
            damping_decrease: 0.1,
            acceptance_cost: 1e-10,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gradient_tol", self.gradient_tol),
            ("step_tol", self.step_tol),
            ("cost_tol", self.cost_tol),
            ("initial_damping", self.initial_damping),
            ("acceptance_cost", self.acceptance_cost),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if !(self.damping_increase > 1.0 && self.damping_increase.is_finite()) {
            return Err(Error::InvalidConfig(format!("damping_increase must exceed 1, got {}", self.damping_increase)));
        }
        if !(self.damping_decrease > 0.0 && self.damping_decrease < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "damping_decrease must lie in (0, 1), got {}",
                self.damping_decrease
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        Ok(())
    }

    fn cost_floor(&self) -> f64 {
        self.cost_tol * f64::EPSILON
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Gradient,
    Step,
    Cost,
    MaxIterations,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub point: RealEmbedding,
    pub cost: f64,
    pub initial_cost: f64,
    /// Linear solves performed (accepted and rejected steps).
    pub iterations: usize,
    pub termination: Termination,
    pub converged: bool,
    /// Cost after every accepted step, starting with the initial cost.
    pub cost_history: Vec<f64>,
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|r| r * r).sum()
}

fn norm(v: &[f64]) -> f64 {
    sum_sq(v).sqrt()
}

pub fn minimize<P: LeastSquaresProblem>(
    problem: &P,
    start: &RealEmbedding,
    cfg: &SolverConfig,
) -> Result<SolveOutcome> {
    let p = problem.variable_count();
    let m = problem.residual_count();
    if start.as_slice().len() != p {
        return Err(Error::LengthMismatch { expected: p, got: start.as_slice().len() });
    }
    cfg.validate()?;

    let mut x = start.as_slice().to_vec();
    let mut r = vec![0.0; m];
    problem.residuals(&x, &mut r);
    let mut cost = sum_sq(&r);
    let initial_cost = cost;
    let mut history = vec![cost];

    let mut jac = vec![0.0; m * p];
    let mut normal = DMatrix::<f64>::zeros(p, p);
    let mut gradient = DVector::<f64>::zeros(p);
    let mut stale = true;

    let mut x_trial = vec![0.0; p];
    let mut r_trial = vec![0.0; m];
    let mut lambda = cfg.initial_damping;
    let mut iterations = 0;

    let termination = loop {
        if cost <= cfg.cost_floor() {
            break Termination::Cost;
        }
        if stale {
            problem.jacobian(&x, &mut jac);
            let j = DMatrix::from_row_slice(m, p, &jac);
            normal = j.tr_mul(&j);
            gradient = j.tr_mul(&DVector::from_column_slice(&r));
            stale = false;
        }
        if gradient.amax() <= cfg.gradient_tol {
            break Termination::Gradient;
        }
        if iterations >= cfg.max_iterations {
            break Termination::MaxIterations;
        }

        let mut retries = 0;
        let step = loop {
            let mut damped = normal.clone();
            for i in 0..p {
                damped[(i, i)] += lambda * normal[(i, i)].max(DIAG_FLOOR);
            }
            match damped.cholesky() {
                Some(chol) => break chol.solve(&(-&gradient)),
                None => {
                    retries += 1;
                    if retries > MAX_FACTORIZATION_RETRIES {
                        return Err(Error::LinearAlgebraFailure { retries: MAX_FACTORIZATION_RETRIES });
                    }
                    lambda *= cfg.damping_increase;
                }
            }
        };
        iterations += 1;

        for ((t, xi), di) in x_trial.iter_mut().zip(&x).zip(step.iter()) {
            *t = xi + di;
        }
        problem.residuals(&x_trial, &mut r_trial);
        let trial_cost = sum_sq(&r_trial);
        let step_small = step.norm() <= cfg.step_tol * (cfg.step_tol + norm(&x));

        if trial_cost < cost {
            let reduction = cost - trial_cost;
            std::mem::swap(&mut x, &mut x_trial);
            std::mem::swap(&mut r, &mut r_trial);
            let previous = cost;
            cost = trial_cost;
            history.push(cost);
            stale = true;
            lambda = (lambda * cfg.damping_decrease).max(MIN_DAMPING);
            if step_small {
                break Termination::Step;
            }
            if cost > cfg.cost_floor() && reduction <= cfg.cost_tol * previous {
                break Termination::Cost;
            }
        } else {
            // Rejected (or non-finite) trial: shrink toward steepest descent.
            lambda *= cfg.damping_increase;
            if step_small || lambda > MAX_DAMPING {
                break Termination::Step;
            }
        }
    };

    Ok(SolveOutcome {
        point: RealEmbedding::from_flat(x)?,
        cost,
        initial_cost,
        iterations,
        termination,
        converged: cost < cfg.acceptance_cost,
        cost_history: history,
    })
}
