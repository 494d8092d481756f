//! JSON run configuration.
//!
//! ```json
//! {
//!   "experiment_id": "quadratic_1d",
//!   "seed": 20240601,
//!   "problem": { "a0": [[2.0]], "feature_map": { "kind": "affine", "matrix": [[1.0]], "offset": [0.0] },
//!                "dim_data": 1, "p_box": 1.0 },
//!   "data": { "kind": "uniform_box" },
//!   "schedule": { "family": "polynomial", "gamma1": 0.1, "exponent": 0.6666666666666666 },
//!   "adam": { "beta1": 0.9, "beta2": 0.999, "eps": 0.1, "batch_size": 4 },
//!   "plan": { "theta0": [0.0], "checkpoints": [0, 100, 1000], "replications": 20 },
//!   "output": { "out_dir": "out" }
//! }
//! ```
//!
//! Omitted plan fields fall back to the `adam` section (`batch_sizes`,
//! `beta_pairs`) or to fixed defaults (`q_floor = 0.05`, `p_moment = 2`).
//! `beta1_values × beta2_values` is only expanded by the `sweep` command.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{DataSpec, Distribution};
use crate::error::{Error, Result};
use crate::experiments::{BetaPair, Experiment, ExperimentPlan};
use crate::schedule::Schedule;
use crate::sop::{Problem, ProblemSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdamSection {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    #[serde(default = "one")]
    pub batch_size: usize,
}

fn one() -> usize {
    1
}

fn default_q() -> f64 {
    0.05
}

fn default_p() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    pub theta0: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub batch_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta_pairs: Vec<BetaPair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta1_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta2_values: Vec<f64>,
    #[serde(default = "default_q")]
    pub q_floor: f64,
    pub checkpoints: Vec<u64>,
    pub replications: u32,
    #[serde(default = "default_p")]
    pub p_moment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub out_dir: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment_id: String,
    pub seed: u64,
    pub problem: ProblemSpec,
    pub data: Distribution,
    pub schedule: Schedule,
    pub adam: AdamSection,
    pub plan: PlanSection,
    pub output: OutputSection,
}

fn check_pair(field: String, b1: f64, b2: f64) -> Result<()> {
    if !(0.0..1.0).contains(&b1) {
        return Err(Error::config(format!("{field}.beta1"), format!("{b1} outside [0, 1)")));
    }
    if !(b2 < 1.0) {
        return Err(Error::config(format!("{field}.beta2"), format!("{b2} must be < 1")));
    }
    if b2 <= b1 * b1 {
        return Err(Error::config(
            format!("{field}.beta2"),
            format!("beta2 = {b2} must exceed beta1² = {}", b1 * b1),
        ));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Cross-field checks; every failure names the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.experiment_id.is_empty() || self.experiment_id.contains(['/', '\\', ',']) {
            return Err(Error::config("experiment_id", "must be non-empty without '/', '\\' or ','"));
        }
        let problem = self.build_problem()?;
        self.data_spec().validate().map_err(|e| Error::config("data", e.to_string()))?;
        self.schedule.validate().map_err(|e| Error::config("schedule", e.to_string()))?;
        let a = &self.adam;
        check_pair("adam".into(), a.beta1, a.beta2)?;
        if !(a.eps > 0.0 && a.eps.is_finite()) {
            return Err(Error::config("adam.eps", "must be positive"));
        }
        if a.batch_size == 0 {
            return Err(Error::config("adam.batch_size", "must be at least 1"));
        }
        for (i, p) in self.plan.beta_pairs.iter().enumerate() {
            check_pair(format!("plan.beta_pairs[{i}]"), p.beta1, p.beta2)?;
        }
        for (i, &b) in self.plan.beta1_values.iter().enumerate() {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::config(format!("plan.beta1_values[{i}]"), "outside [0, 1)"));
            }
        }
        for (i, &b) in self.plan.beta2_values.iter().enumerate() {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::config(format!("plan.beta2_values[{i}]"), "outside (0, 1)"));
            }
        }
        if self.plan.theta0.len() != problem.dim_theta() {
            return Err(Error::config(
                "plan.theta0",
                format!("has {} entries, the problem has d = {}", self.plan.theta0.len(), problem.dim_theta()),
            ));
        }
        if self.output.out_dir.is_empty() {
            return Err(Error::config("output.out_dir", "is empty"));
        }
        self.plan(false).validate().map_err(|e| match e {
            Error::Config { field, message } => Error::config(format!("plan.{field}"), message),
            other => other,
        })
    }

    pub fn build_problem(&self) -> Result<Problem> {
        Problem::new(self.problem.clone()).map_err(|e| Error::config("problem", e.to_string()))
    }

    pub fn data_spec(&self) -> DataSpec {
        DataSpec {
            dim_data: self.problem.dim_data,
            p_box: self.problem.p_box,
            distribution: self.data.clone(),
            seed: self.seed,
        }
    }

    /// The `(β₁, β₂)` pairs to run. Explicit pairs (or the `adam` pair when
    /// none are listed) come first; with `expand_grid`, admissible members
    /// of `beta1_values × beta2_values` follow.
    pub fn beta_grid(&self, expand_grid: bool) -> Vec<BetaPair> {
        let mut grid = if self.plan.beta_pairs.is_empty() {
            vec![BetaPair::new(self.adam.beta1, self.adam.beta2)]
        } else {
            self.plan.beta_pairs.clone()
        };
        if expand_grid {
            for &b1 in &self.plan.beta1_values {
                for &b2 in &self.plan.beta2_values {
                    let p = BetaPair::new(b1, b2);
                    if b2 > b1 * b1 && !grid.contains(&p) {
                        grid.push(p);
                    }
                }
            }
        }
        grid
    }

    pub fn plan(&self, expand_grid: bool) -> ExperimentPlan {
        ExperimentPlan {
            experiment_id: self.experiment_id.clone(),
            eps: self.adam.eps,
            theta0: self.plan.theta0.clone(),
            batch_sizes: if self.plan.batch_sizes.is_empty() {
                vec![self.adam.batch_size]
            } else {
                self.plan.batch_sizes.clone()
            },
            beta_grid: self.beta_grid(expand_grid),
            q_floor: self.plan.q_floor,
            checkpoints: self.plan.checkpoints.clone(),
            replications: self.plan.replications,
            p_moment: self.plan.p_moment,
        }
    }

    pub fn experiment(&self, expand_grid: bool) -> Result<Experiment> {
        Experiment::new(
            self.build_problem()?,
            self.data_spec(),
            self.schedule.clone(),
            self.plan(expand_grid),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
      "experiment_id": "unit",
      "seed": 7,
      "problem": {
        "a0": [[2.0]],
        "feature_map": { "kind": "affine", "matrix": [[1.0]], "offset": [0.0] },
        "dim_data": 1,
        "p_box": 1.0
      },
      "data": { "kind": "uniform_box" },
      "schedule": { "family": "polynomial", "gamma1": 0.1, "exponent": 0.6666666666666666 },
      "adam": { "beta1": 0.9, "beta2": 0.999, "eps": 0.1, "batch_size": 2 },
      "plan": {
        "theta0": [0.5],
        "beta1_values": [0.5, 0.9],
        "beta2_values": [0.8, 0.999],
        "checkpoints": [0, 10, 100],
        "replications": 3
      },
      "output": { "out_dir": "out" }
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let c = RunConfig::from_json(SAMPLE).unwrap();
        assert_eq!(c.plan.q_floor, 0.05);
        assert_eq!(c.plan.p_moment, 2.0);
        let again = RunConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn grid_expansion() {
        let c = RunConfig::from_json(SAMPLE).unwrap();
        assert_eq!(c.beta_grid(false), vec![BetaPair::new(0.9, 0.999)]);
        // (0.9, 0.8) is dropped: 0.8 ≤ 0.81
        let g = c.beta_grid(true);
        assert_eq!(g.len(), 3);
        assert!(!g.contains(&BetaPair::new(0.9, 0.8)));
        assert_eq!(c.plan(true).batch_sizes, vec![2]);
    }

    #[test]
    fn squared_beta1_is_rejected_with_field() {
        let text = SAMPLE.replace("\"beta2\": 0.999", "\"beta2\": 0.81");
        match RunConfig::from_json(&text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "adam.beta2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn anchored_errors() {
        let bad = SAMPLE.replace("\"theta0\": [0.5]", "\"theta0\": [0.5, 1.0]");
        assert!(matches!(RunConfig::from_json(&bad), Err(Error::Config { field, .. }) if field == "plan.theta0"));
        let bad = SAMPLE.replace("\"replications\": 3", "\"replications\": 0");
        assert!(matches!(RunConfig::from_json(&bad), Err(Error::Config { field, .. }) if field == "plan.replications"));
        let bad = SAMPLE.replace("\"a0\": [[2.0]]", "\"a0\": [[0.0]]");
        assert!(matches!(RunConfig::from_json(&bad), Err(Error::Config { field, .. }) if field == "problem"));
        let bad = SAMPLE.replace("\"seed\": 7,", "\"seed\": 7, \"extra\": 1,");
        let err = RunConfig::from_json(&bad).unwrap_err();
        assert!(matches!(&err, Error::Config { field, .. } if field.starts_with("line")));
        assert_eq!(err.exit_code(), 2);
    }
}
