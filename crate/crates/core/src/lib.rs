//! Exact mini-batch Adam on strongly convex stochastic optimization problems,
//! the explicit a priori bound ladder for its iterates, and a Monte Carlo
//! harness that audits the bounds and the `√γ_n + M⁻¹` error behaviour.
//!
//! Module map:
//!
//! - [`sop`]: the regularized quadratic problem family, gradients, lifting
//!   and certified constants.
//! - [`adam`]: the optimizer recursion and trajectory runner.
//! - [`schedule`]: step-size schedules and their admissibility check.
//! - [`bounds`]: the constant ladder, the pathwise bound and auxiliary oracles.
//! - [`data`]: counter-based reproducible data streams.
//! - [`experiments`]: error estimation, rate fitting and bound audits.
//! - [`config`] / [`cli`]: JSON configuration and the command-line front end.

pub mod adam;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod schedule;
pub mod sop;

pub use adam::{adam_step, AdamConfig, AdamState, StepFactors};
pub use bounds::{compute_constants, BoundConstants, BoundInputs};
pub use data::{DataSpec, Distribution, SampleStream};
pub use error::{Error, Result};
pub use experiments::{BetaPair, Execution, Experiment, ExperimentPlan};
pub use schedule::Schedule;
pub use sop::{Problem, ProblemConstants};
