//! The Adam recursion as a deterministic state machine.
//!
//! With mini-batch gradient `g` at step `n ≥ 1`, per coordinate `i`:
//!
//! ```text
//! m_i ← β₁ m_i + (1 − β₁) g_i
//! v_i ← β₂ v_i + (1 − β₂) g_i²
//! θ_i ← θ_i − γ_n (1 − β₁ⁿ)⁻¹ (ε + √(v_i / (1 − β₂ⁿ)))⁻¹ m_i
//! ```
//!
//! `ε` sits outside the square root and the second-moment bias correction is
//! applied inside it. Moments start at zero.

use serde::{Deserialize, Serialize};

use crate::data::SampleStream;
use crate::error::{Error, Result};
use crate::linalg::{dist, norm};
use crate::schedule::Schedule;
use crate::sop::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub batch_size: usize,
}

impl AdamConfig {
    pub fn new(beta1: f64, beta2: f64, eps: f64, batch_size: usize) -> Result<Self> {
        let c = AdamConfig {
            beta1,
            beta2,
            eps,
            batch_size,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.beta1) {
            return Err(Error::domain(format!("beta1 = {} outside [0, 1)", self.beta1)));
        }
        if !(self.beta2 > 0.0 && self.beta2 < 1.0) {
            return Err(Error::domain(format!("beta2 = {} outside (0, 1)", self.beta2)));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::domain(format!("eps = {} must be positive", self.eps)));
        }
        if self.batch_size == 0 {
            return Err(Error::input("batch size must be at least 1"));
        }
        Ok(())
    }

    /// `β₂ > β₁²`, the regime covered by the a priori bounds.
    pub fn second_moment_dominates(&self) -> bool {
        self.beta2 > self.beta1 * self.beta1
    }
}

#[inline]
fn one_minus_pow(beta: f64, n: u64) -> f64 {
    if n <= i32::MAX as u64 {
        1.0 - beta.powi(n as i32)
    } else {
        1.0 - beta.powf(n as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub step: u64,
    pub theta: Vec<f64>,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl AdamState {
    pub fn new(theta0: Vec<f64>) -> Self {
        let d = theta0.len();
        AdamState {
            step: 0,
            theta: theta0,
            m: vec![0.0; d],
            v: vec![0.0; d],
        }
    }

    /// In-place transition from step `n − 1` to step `n`.
    pub fn advance(&mut self, config: &AdamConfig, gamma_n: f64, batch_grad: &[f64]) -> Result<()> {
        let n = self.step + 1;
        if batch_grad.len() != self.theta.len() {
            return Err(Error::input("gradient dimension does not match theta"));
        }
        if let Some(i) = batch_grad.iter().position(|g| !g.is_finite()) {
            return Err(Error::NumericalAtStep {
                step: n,
                message: format!("non-finite gradient in coordinate {i}"),
            });
        }
        let (b1, b2) = (config.beta1, config.beta2);
        let bias1 = one_minus_pow(b1, n);
        let bias2 = one_minus_pow(b2, n);
        let step_scale = gamma_n / bias1;
        for i in 0..self.theta.len() {
            let g = batch_grad[i];
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * g;
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * g * g;
            self.theta[i] -= step_scale / (config.eps + (self.v[i] / bias2).sqrt()) * self.m[i];
        }
        self.step = n;
        Ok(())
    }
}

/// Pure single-step transition.
pub fn adam_step(state: &AdamState, config: &AdamConfig, gamma_n: f64, batch_grad: &[f64]) -> Result<AdamState> {
    if !(gamma_n > 0.0 && gamma_n.is_finite()) {
        return Err(Error::domain(format!("step size must be positive, got {gamma_n}")));
    }
    let mut next = state.clone();
    next.advance(config, gamma_n, batch_grad)?;
    Ok(next)
}

/// Bias corrections and effective per-coordinate step factors at a state.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFactors {
    pub bias1: f64,
    pub bias2: f64,
    /// `γ_n (1 − β₁ⁿ)⁻¹ (ε + √(v_i / (1 − β₂ⁿ)))⁻¹`.
    pub eff: Vec<f64>,
}

impl StepFactors {
    /// Factors for `state` (which must be at step `n ≥ 1`) with step size `gamma_n`.
    pub fn at(state: &AdamState, config: &AdamConfig, gamma_n: f64) -> Self {
        let n = state.step;
        let bias1 = one_minus_pow(config.beta1, n);
        let bias2 = one_minus_pow(config.beta2, n);
        let eff = state
            .v
            .iter()
            .map(|v| gamma_n / bias1 / (config.eps + (v / bias2).sqrt()))
            .collect();
        StepFactors { bias1, bias2, eff }
    }
}

/// Everything a test or audit may want to inspect after a step.
#[derive(Debug)]
pub struct StepObservation<'a> {
    pub n: u64,
    pub gamma: f64,
    pub prev_theta: &'a [f64],
    pub state: &'a AdamState,
    pub batch_grad: &'a [f64],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub checkpoints: Vec<u64>,
    /// `θ_n` at each checkpoint.
    pub thetas: Vec<Vec<f64>>,
    /// `max_{k ≤ n} ‖θ_k‖` at each checkpoint.
    pub running_sup: Vec<f64>,
    /// `max_k ‖θ_k‖` over the whole run.
    pub sup_norm: f64,
    pub final_state: AdamState,
}

/// Everything that defines a trajectory except its id.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySetup<'a> {
    pub problem: &'a Problem,
    pub config: &'a AdamConfig,
    pub schedule: &'a Schedule,
    pub stream: &'a SampleStream,
    pub theta0: &'a [f64],
    pub n_steps: u64,
    pub checkpoints: &'a [u64],
}

impl TrajectorySetup<'_> {
    fn check(&self) -> Result<()> {
        self.config.validate()?;
        if self.theta0.len() != self.problem.dim_theta() {
            return Err(Error::input("theta0 has the wrong dimension"));
        }
        if self.stream.dim() != self.problem.dim_data() {
            return Err(Error::input("data stream dimension does not match the problem"));
        }
        if self.n_steps > u32::MAX as u64 {
            return Err(Error::input("n_steps exceeds the generator's step counter"));
        }
        if self.n_steps > self.schedule.horizon() {
            return Err(Error::input("schedule is shorter than the requested run"));
        }
        if self.config.batch_size > u32::MAX as usize {
            return Err(Error::input("batch size exceeds the generator's batch counter"));
        }
        if self.checkpoints.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::input("checkpoints must be sorted"));
        }
        if self.checkpoints.last().is_some_and(|&c| c > self.n_steps) {
            return Err(Error::input("checkpoint beyond n_steps"));
        }
        Ok(())
    }
}

/// Runs trajectory `trajectory_id` and records `θ` at the checkpoints.
pub fn run_trajectory(setup: &TrajectorySetup<'_>, trajectory_id: u32) -> Result<TrajectoryRecord> {
    run_trajectory_observed(setup, trajectory_id, None)
}

/// [`run_trajectory`] with a callback after every step.
pub fn run_trajectory_observed(
    setup: &TrajectorySetup<'_>,
    trajectory_id: u32,
    mut observer: Option<&mut dyn FnMut(&StepObservation<'_>)>,
) -> Result<TrajectoryRecord> {
    setup.check()?;
    let problem = setup.problem;
    let d = problem.dim_theta();
    let dl = problem.dim_lifted();
    let batch = setup.config.batch_size;
    let inv_batch = 1.0 / batch as f64;

    let mut state = AdamState::new(setup.theta0.to_vec());
    let mut raw = vec![0.0; problem.dim_data()];
    let mut lifted = vec![0.0; dl];
    let mut mean_lift = vec![0.0; dl];
    let mut grad = vec![0.0; d];
    let mut prev = vec![0.0; d];

    let mut sup = norm(&state.theta);
    let mut thetas = Vec::with_capacity(setup.checkpoints.len());
    let mut running_sup = Vec::with_capacity(setup.checkpoints.len());
    let mut next_cp = 0;
    let record = |n: u64, theta: &[f64], sup: f64, thetas: &mut Vec<Vec<f64>>, rs: &mut Vec<f64>, next: &mut usize| {
        while *next < setup.checkpoints.len() && setup.checkpoints[*next] == n {
            thetas.push(theta.to_vec());
            rs.push(sup);
            *next += 1;
        }
    };
    record(0, &state.theta, sup, &mut thetas, &mut running_sup, &mut next_cp);

    for n in 1..=setup.n_steps {
        let gamma = setup.schedule.gamma(n)?;
        mean_lift.fill(0.0);
        for m in 0..batch {
            setup.stream.sample_into(trajectory_id, n as u32, m as u32, &mut raw);
            problem.lift_into(&raw, &mut lifted);
            for (a, z) in mean_lift.iter_mut().zip(&lifted) {
                *a += z;
            }
        }
        for a in mean_lift.iter_mut() {
            *a *= inv_batch;
        }
        problem.grad_theta_into(&state.theta, &mean_lift, &mut grad);
        if observer.is_some() {
            prev.copy_from_slice(&state.theta);
        }
        state.advance(setup.config, gamma, &grad)?;
        let nrm = norm(&state.theta);
        if !nrm.is_finite() {
            return Err(Error::NumericalAtStep {
                step: n,
                message: "iterate became non-finite".into(),
            });
        }
        sup = sup.max(nrm);
        if let Some(obs) = observer.as_mut() {
            obs(&StepObservation {
                n,
                gamma,
                prev_theta: &prev,
                state: &state,
                batch_grad: &grad,
            });
        }
        record(n, &state.theta, sup, &mut thetas, &mut running_sup, &mut next_cp);
    }
    Ok(TrajectoryRecord {
        checkpoints: setup.checkpoints.to_vec(),
        thetas,
        running_sup,
        sup_norm: sup,
        final_state: state,
    })
}

/// Distance from `θ_n` to `target` at each checkpoint.
pub fn checkpoint_errors(record: &TrajectoryRecord, target: &[f64]) -> Vec<f64> {
    record.thetas.iter().map(|t| dist(t, target)).collect()
}
