//! Monte Carlo error estimation, sweeps, rate fits and bound audits.
//!
//! Replications are the data-parallel unit. With the `parallel` feature they
//! run on a rayon pool; results are always collected in replication order so
//! every aggregate is identical regardless of worker count.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adam::{run_trajectory, AdamConfig, TrajectoryRecord, TrajectorySetup};
use crate::bounds::{self, BoundInputs};
use crate::data::{DataSpec, SampleStream};
use crate::error::{Error, Result};
use crate::linalg::{dist, norm};
use crate::schedule::Schedule;
use crate::sop::{self, Problem, ProblemConstants};

/// Bootstrap resamples behind every reported standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Probes used when certifying problem constants for a sweep.
pub const CERTIFY_PROBES: usize = 10_000;

pub const CSV_HEADER: &str =
    "experiment_id,M,beta1,beta2,n,gamma_n,lp_error,lp_error_stderr,sup_norm_max,bound_b,replications,seed";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPair {
    pub beta1: f64,
    pub beta2: f64,
}

impl BetaPair {
    pub fn new(beta1: f64, beta2: f64) -> Self {
        BetaPair { beta1, beta2 }
    }

    /// `β₁, β₂ ∈ [q, 1)` and `β₁² + q ≤ β₂`.
    pub fn in_region(&self, q: f64) -> bool {
        let (b1, b2) = (self.beta1, self.beta2);
        (q..1.0).contains(&b1) && (q..1.0).contains(&b2) && b1 * b1 + q <= b2
    }
}

/// How replications are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Global rayon pool (sequential without the `parallel` feature).
    #[default]
    Parallel,
    /// Dedicated pool with this many workers.
    Threads(usize),
}

/// Maps `f` over `0..count`, returning results in index order.
pub fn map_indexed<T, F>(exec: Execution, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match exec {
            Execution::Sequential => (0..count).map(f).collect(),
            Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
            Execution::Threads(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::input(format!("cannot build worker pool: {e}")))?;
                pool.install(|| (0..count).into_par_iter().map(f).collect())
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = exec;
        (0..count).map(f).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub experiment_id: String,
    pub eps: f64,
    /// Initial iterate `ξ`.
    pub theta0: Vec<f64>,
    pub batch_sizes: Vec<usize>,
    pub beta_grid: Vec<BetaPair>,
    /// Admissible-region parameter `q ∈ (0, 1/2)`.
    pub q_floor: f64,
    pub checkpoints: Vec<u64>,
    pub replications: u32,
    /// Moment exponent `p` of the `L^p` error.
    pub p_moment: f64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::config("eps", "must be positive"));
        }
        if self.theta0.iter().any(|t| !t.is_finite()) {
            return Err(Error::config("theta0", "must be finite"));
        }
        if self.batch_sizes.is_empty() || self.batch_sizes.contains(&0) {
            return Err(Error::config("batch_sizes", "need at least one batch size, all ≥ 1"));
        }
        if self.beta_grid.is_empty() {
            return Err(Error::config("beta_grid", "is empty"));
        }
        if !(self.q_floor > 0.0 && self.q_floor < 0.5) {
            return Err(Error::config("q_floor", "must lie in (0, 1/2)"));
        }
        if self.checkpoints.is_empty() || self.checkpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("checkpoints", "must be non-empty and strictly increasing"));
        }
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if !(self.p_moment >= 1.0 && self.p_moment.is_finite()) {
            return Err(Error::config("p_moment", "must be at least 1"));
        }
        Ok(())
    }

    pub fn max_step(&self) -> u64 {
        self.checkpoints.last().copied().unwrap_or(0)
    }
}

/// Problem, data law, schedule and plan, with the derived targets.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub problem: Problem,
    pub data: DataSpec,
    pub schedule: Schedule,
    pub plan: ExperimentPlan,
    stream: SampleStream,
    /// Minimizer of the expected loss (quadrature surrogate for continuous data).
    pub theta_star: Vec<f64>,
    pub constants: ProblemConstants,
}

impl Experiment {
    pub fn new(problem: Problem, data: DataSpec, schedule: Schedule, plan: ExperimentPlan) -> Result<Self> {
        plan.validate()?;
        schedule.validate()?;
        if plan.theta0.len() != problem.dim_theta() {
            return Err(Error::config("plan.theta0", "length differs from the parameter dimension"));
        }
        let stream = SampleStream::new(data.clone())?;
        let theta_star = estimate_minimizer(&problem, &data, sop::ANCHOR_TOL)?;
        let constants = sop::certify_constants(&problem, &data, CERTIFY_PROBES)?;
        Ok(Experiment {
            problem,
            data,
            schedule,
            plan,
            stream,
            theta_star,
            constants,
        })
    }

    pub fn stream(&self) -> &SampleStream {
        &self.stream
    }

    pub fn adam_config(&self, batch_size: usize, beta: BetaPair) -> Result<AdamConfig> {
        AdamConfig::new(beta.beta1, beta.beta2, self.plan.eps, batch_size)
    }

    /// Inputs of the bound ladder for one `(β₁, β₂)`; `𝐌 = 𝒱 = 0` since the
    /// moments start at zero.
    pub fn bound_inputs(&self, beta: BetaPair) -> BoundInputs {
        let c = &self.constants;
        BoundInputs {
            alpha: beta.beta1,
            beta: beta.beta2,
            eps: self.plan.eps,
            d: self.problem.dim_theta(),
            tau1: c.tau1,
            tau2: c.tau2,
            kappa: c.kappa,
            big_k: c.big_k,
            c_data: c.c_data,
            rho: c.rho,
            m_init_bound: 0.0,
            v_init_bound: 0.0,
            gamma1: self.schedule.gamma1(),
            schedule: self.schedule.clone(),
            theta0_dist: dist(&self.plan.theta0, &c.theta_star_anchor),
            theta_star_norm: norm(&c.theta_star_anchor),
        }
    }

    /// `B` for one `(β₁, β₂)`, or `+∞` when the ladder cannot be evaluated.
    pub fn bound_b(&self, beta: BetaPair) -> f64 {
        bounds::apriori_bound(&self.bound_inputs(beta)).unwrap_or(f64::INFINITY)
    }

    /// Runs replications `0..R` for one `(M, β)` up to the last checkpoint.
    pub fn run_series(&self, batch_size: usize, beta: BetaPair, exec: Execution) -> Result<Vec<TrajectoryRecord>> {
        let config = self.adam_config(batch_size, beta)?;
        let setup = self.setup(&config);
        map_indexed(exec, self.plan.replications as usize, |r| run_trajectory(&setup, r as u32))
    }

    fn setup<'a>(&'a self, config: &'a AdamConfig) -> TrajectorySetup<'a> {
        TrajectorySetup {
            problem: &self.problem,
            config,
            schedule: &self.schedule,
            stream: &self.stream,
            theta0: &self.plan.theta0,
            n_steps: self.plan.max_step(),
            checkpoints: &self.plan.checkpoints,
        }
    }

    /// `L^p` error at checkpoint `n` for one `(M, β)`.
    pub fn estimate_lp_error(&self, batch_size: usize, beta: BetaPair, n: u64, exec: Execution) -> Result<LpEstimate> {
        let idx = self
            .plan
            .checkpoints
            .iter()
            .position(|&c| c == n)
            .ok_or_else(|| Error::input(format!("n = {n} is not a plan checkpoint")))?;
        let records = self.run_series(batch_size, beta, exec)?;
        let dists: Vec<f64> = records.iter().map(|r| dist(&r.thetas[idx], &self.theta_star)).collect();
        Ok(lp_error(&dists, self.plan.p_moment, self.bootstrap_seed(batch_size, beta, n)))
    }

    fn bootstrap_seed(&self, batch_size: usize, beta: BetaPair, n: u64) -> u64 {
        self.data.seed
            ^ (batch_size as u64).rotate_left(17)
            ^ beta.beta1.to_bits().rotate_left(29)
            ^ beta.beta2.to_bits().rotate_left(43)
            ^ n.rotate_left(7)
    }

    /// Runs every `(M, β)` series; all replications of all series share
    /// one parallel map.
    pub fn run_sweep(&self, exec: Execution) -> Result<SweepResult> {
        let plan = &self.plan;
        let pairs: Vec<(usize, BetaPair)> = plan
            .batch_sizes
            .iter()
            .flat_map(|&m| plan.beta_grid.iter().map(move |&b| (m, b)))
            .collect();
        let configs = pairs
            .iter()
            .map(|&(m, b)| self.adam_config(m, b))
            .collect::<Result<Vec<_>>>()?;
        let reps = plan.replications as usize;
        let records = map_indexed(exec, pairs.len() * reps, |job| {
            let setup = self.setup(&configs[job / reps]);
            run_trajectory(&setup, (job % reps) as u32)
        })?;
        let mut series = Vec::with_capacity(pairs.len());
        for (k, &(m, beta)) in pairs.iter().enumerate() {
            series.push(self.summarize(m, beta, &records[k * reps..(k + 1) * reps])?);
        }
        Ok(SweepResult {
            experiment_id: plan.experiment_id.clone(),
            seed: self.data.seed,
            theta_star: self.theta_star.clone(),
            series,
        })
    }

    fn summarize(&self, batch_size: usize, beta: BetaPair, records: &[TrajectoryRecord]) -> Result<SeriesResult> {
        let bound_b = self.bound_b(beta);
        let mut rows = Vec::with_capacity(self.plan.checkpoints.len());
        for (i, &n) in self.plan.checkpoints.iter().enumerate() {
            let dists: Vec<f64> = records.iter().map(|r| dist(&r.thetas[i], &self.theta_star)).collect();
            let est = lp_error(&dists, self.plan.p_moment, self.bootstrap_seed(batch_size, beta, n));
            let sup = records.iter().map(|r| r.running_sup[i]).fold(0.0, f64::max);
            rows.push(ErrorRow {
                experiment_id: self.plan.experiment_id.clone(),
                batch_size,
                beta1: beta.beta1,
                beta2: beta.beta2,
                n,
                gamma_n: if n == 0 { f64::NAN } else { self.schedule.gamma(n)? },
                lp_error: est.value,
                lp_error_stderr: est.stderr,
                sup_norm_max: sup,
                bound_b,
                replications: self.plan.replications,
                seed: self.data.seed,
            });
        }
        Ok(SeriesResult {
            batch_size,
            beta,
            in_region: beta.in_region(self.plan.q_floor),
            bound_b,
            sup_norms: records.iter().map(|r| r.sup_norm).collect(),
            first_violation: first_violations(records, bound_b),
            rows,
        })
    }
}

fn first_violations(records: &[TrajectoryRecord], bound_b: f64) -> Vec<Option<u64>> {
    records
        .iter()
        .map(|r| r.running_sup.iter().position(|&s| s > bound_b).map(|i| r.checkpoints[i]))
        .collect()
}

/// Minimizer of `θ ↦ E[𝓛(θ, lift(X))]`.
///
/// `∇_θ𝓛` is affine in the lifted sample, so the expected gradient equals
/// the gradient at the mean lifted sample and the minimizer is the anchor
/// minimizer at that mean. The mean is exact for finite laws and uses the
/// fixed midpoint grid of [`DataSpec::expectation_nodes`] for the uniform box.
pub fn estimate_minimizer(problem: &Problem, data: &DataSpec, tol: f64) -> Result<Vec<f64>> {
    data.validate()?;
    if data.dim_data != problem.dim_data() {
        return Err(Error::input("data dimension does not match the problem"));
    }
    let mut mean = vec![0.0; problem.dim_lifted()];
    let mut z = vec![0.0; problem.dim_lifted()];
    for (x, w) in data.expectation_nodes() {
        problem.lift_into(&x, &mut z);
        for (a, v) in mean.iter_mut().zip(&z) {
            *a += w * v;
        }
    }
    sop::solve_anchor_minimizer(problem, &mean, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// `(R⁻¹ Σ dᵣ^p)^{1/p}` with a bootstrap standard error from
/// [`BOOTSTRAP_RESAMPLES`] resamples on a seeded ChaCha8 stream.
pub fn lp_error(dists: &[f64], p: f64, seed: u64) -> LpEstimate {
    let r = dists.len();
    if r == 0 {
        return LpEstimate {
            value: f64::NAN,
            stderr: f64::NAN,
        };
    }
    let powered: Vec<f64> = dists.iter().map(|d| d.powf(p)).collect();
    let value = (powered.iter().sum::<f64>() / r as f64).powf(1.0 / p);
    if r == 1 || powered.iter().all(|&v| v == powered[0]) {
        return LpEstimate { value, stderr: 0.0 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boots: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let s: f64 = (0..r).map(|_| powered[rng.gen_range(0..r)]).sum();
            (s / r as f64).powf(1.0 / p)
        })
        .collect();
    let mean = boots.iter().sum::<f64>() / boots.len() as f64;
    let var = boots.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (boots.len() - 1) as f64;
    LpEstimate {
        value,
        stderr: var.sqrt(),
    }
}

/// One CSV row: the error at checkpoint `n` for one `(M, β₁, β₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub experiment_id: String,
    #[serde(rename = "M")]
    pub batch_size: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub n: u64,
    /// `NaN` at `n = 0`.
    pub gamma_n: f64,
    pub lp_error: f64,
    pub lp_error_stderr: f64,
    /// Largest `‖θ_k‖`, `k ≤ n`, over all replications.
    pub sup_norm_max: f64,
    pub bound_b: f64,
    pub replications: u32,
    pub seed: u64,
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl ErrorRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment_id,
            self.batch_size,
            num(self.beta1),
            num(self.beta2),
            self.n,
            num(self.gamma_n),
            num(self.lp_error),
            num(self.lp_error_stderr),
            num(self.sup_norm_max),
            num(self.bound_b),
            self.replications,
            self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub batch_size: usize,
    pub beta: BetaPair,
    pub in_region: bool,
    pub bound_b: f64,
    /// `sup_n ‖θ_n‖` per replication.
    pub sup_norms: Vec<f64>,
    /// First checkpoint at which each replication's running sup exceeded `B`.
    pub first_violation: Vec<Option<u64>>,
    pub rows: Vec<ErrorRow>,
}

impl SeriesResult {
    /// `(γ_n, lp_error)` for `n ≥ 1`.
    pub fn rate_points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().filter(|r| r.n > 0).map(|r| (r.gamma_n, r.lp_error)).collect()
    }

    pub fn row_at(&self, n: u64) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub experiment_id: String,
    pub seed: u64,
    pub theta_star: Vec<f64>,
    pub series: Vec<SeriesResult>,
}

impl SweepResult {
    pub fn rows(&self) -> impl Iterator<Item = &ErrorRow> {
        self.series.iter().flat_map(|s| s.rows.iter())
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in self.rows() {
            out.push_str(&row.to_csv());
            out.push('\n');
        }
        out
    }

    pub fn series(&self, batch_size: usize, beta: BetaPair) -> Option<&SeriesResult> {
        self.series.iter().find(|s| s.batch_size == batch_size && s.beta == beta)
    }

    /// Rate fits, the batch-floor coefficient and audits for the whole sweep.
    pub fn report(&self, eps: f64, theta0_norm: f64) -> ErrorReport {
        let fits = self
            .series
            .iter()
            .map(|s| SeriesFit {
                batch_size: s.batch_size,
                beta: s.beta,
                fit: fit_rate(&s.rate_points(), FloorMode::LargestCheckpoint).ok(),
            })
            .collect();
        let mut c0 = Vec::new();
        let mut floors = Vec::new();
        let betas: Vec<BetaPair> = self.series.iter().map(|s| s.beta).fold(Vec::new(), |mut acc, b| {
            if !acc.contains(&b) {
                acc.push(b);
            }
            acc
        });
        for beta in &betas {
            let mut pts: Vec<FloorPoint> = self
                .series
                .iter()
                .filter(|s| s.beta == *beta)
                .filter_map(|s| {
                    s.rows.last().map(|r| FloorPoint {
                        batch_size: s.batch_size,
                        lp_error: r.lp_error,
                        stderr: r.lp_error_stderr,
                    })
                })
                .collect();
            pts.sort_by_key(|p| p.batch_size);
            // least squares of error ≈ c₀/M through the origin
            let (num, den) = pts
                .iter()
                .fold((0.0, 0.0), |(a, b), p| (a + p.lp_error / p.batch_size as f64, b + (p.batch_size as f64).powi(-2)));
            c0.push((*beta, num / den));
            floors.push((*beta, audit_batch_floor(&pts)));
        }
        let pathwise = self
            .series
            .iter()
            .map(|s| (s.batch_size, s.beta, audit_pathwise_bound(s)))
            .collect();
        let uniform = {
            let obs: Vec<(BetaPair, f64)> = self
                .series
                .iter()
                .map(|s| (s.beta, s.sup_norms.iter().copied().fold(0.0, f64::max)))
                .collect();
            audit_uniform_in_beta(&obs, eps, theta0_norm).ok()
        };
        ErrorReport {
            fits,
            c0_hat: c0,
            batch_floor: floors,
            pathwise,
            uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub batch_size: usize,
    pub beta: BetaPair,
    pub fit: Option<RateFit>,
}

/// Aggregated diagnostics of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub fits: Vec<SeriesFit>,
    /// Per `β`: fitted `c₀` in `error(n_max) ≈ c₀ / M`.
    pub c0_hat: Vec<(BetaPair, f64)>,
    pub batch_floor: Vec<(BetaPair, BatchFloorAudit)>,
    pub pathwise: Vec<(usize, BetaPair, PathwiseAudit)>,
    pub uniform: Option<UniformAudit>,
}

/// What is subtracted from the raw error before the log-log fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FloorMode {
    Fixed(f64),
    /// Error at the largest `n`, capped per point at 10% of the raw error.
    LargestCheckpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// `𝓬_β` in `error ≈ 𝓬_β γ_n^slope`.
    pub coefficient: f64,
    pub slope: f64,
    pub r2: f64,
    pub floor: f64,
}

/// Ordinary least squares of `log(error − floor)` on `log γ_n`.
///
/// `points` are `(γ_n, error)` pairs ordered by increasing `n`.
pub fn fit_rate(points: &[(f64, f64)], floor: FloorMode) -> Result<RateFit> {
    if points.len() < 4 {
        return Err(Error::input("rate fit needs at least 4 checkpoints"));
    }
    if points.iter().any(|&(g, e)| !(g > 0.0 && g.is_finite() && e > 0.0 && e.is_finite())) {
        return Err(Error::input("rate fit needs positive finite step sizes and errors"));
    }
    let (gmin, gmax) = points
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(g, _)| (lo.min(g), hi.max(g)));
    if gmax < 10.0 * gmin {
        return Err(Error::input("step sizes must span at least one decade"));
    }
    let (floor_value, capped) = match floor {
        FloorMode::Fixed(f) => (f, false),
        FloorMode::LargestCheckpoint => (points.last().map_or(0.0, |p| p.1), true),
    };
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(g, e)| {
            let sub = if capped { floor_value.min(0.1 * e) } else { floor_value };
            (g.ln(), (e - sub).ln())
        })
        .collect();
    if xy.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::input("floor exceeds an observed error"));
    }
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(RateFit {
        coefficient: intercept.exp(),
        slope,
        r2,
        floor: floor_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathwiseAudit {
    pub holds: bool,
    /// `max_r sup_n ‖θ_n‖ / B`.
    pub max_ratio: f64,
    pub worst_replication: usize,
    /// Earliest checkpoint where some replication exceeded `B`.
    pub first_violation_step: Option<u64>,
}

/// Checks `sup_n ‖θ_n‖ ≤ B` for every replication of a series.
pub fn audit_pathwise_bound(series: &SeriesResult) -> PathwiseAudit {
    audit_sup_norms(&series.sup_norms, &series.first_violation, series.bound_b)
}

/// [`audit_pathwise_bound`] on raw trajectory records and an explicit bound.
pub fn audit_records(records: &[TrajectoryRecord], bound_b: f64) -> PathwiseAudit {
    let sups: Vec<f64> = records.iter().map(|r| r.sup_norm).collect();
    audit_sup_norms(&sups, &first_violations(records, bound_b), bound_b)
}

fn audit_sup_norms(sups: &[f64], first: &[Option<u64>], bound_b: f64) -> PathwiseAudit {
    let (worst, max_sup) = sups
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, s)| if s > acc.1 { (i, s) } else { acc });
    PathwiseAudit {
        holds: sups.iter().all(|&s| s <= bound_b),
        max_ratio: max_sup / bound_b,
        worst_replication: worst,
        first_violation_step: first.iter().flatten().copied().min(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformAudit {
    /// Smallest `c` with `max sup-norm ≤ uniform_bound_rhs(·, c)` on every pair.
    pub c: f64,
    /// `(pair, observed sup-norm, envelope − observed)`.
    pub slack: Vec<(BetaPair, f64, f64)>,
    pub max_sup_norm: f64,
}

/// Fits the single envelope constant `c` over `(β, max sup-norm)` observations.
pub fn audit_uniform_in_beta(observations: &[(BetaPair, f64)], eps: f64, theta0_norm: f64) -> Result<UniformAudit> {
    if observations.is_empty() {
        return Err(Error::input("no observations"));
    }
    let shapes = observations
        .iter()
        .map(|(b, _)| bounds::uniform_bound_rhs(b.beta1, b.beta2, eps, theta0_norm, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let c = observations
        .iter()
        .zip(&shapes)
        .map(|((_, s), shape)| s / shape)
        .fold(0.0, f64::max);
    let slack = observations
        .iter()
        .zip(&shapes)
        .map(|(&(b, s), shape)| (b, s, c * shape - s))
        .collect();
    Ok(UniformAudit {
        c,
        slack,
        max_sup_norm: observations.iter().map(|o| o.1).fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloorPoint {
    pub batch_size: usize,
    pub lp_error: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchFloorAudit {
    pub holds: bool,
    /// Consecutive batch sizes `(M_k, M_{k+1})` where the error rose by
    /// more than two combined standard errors.
    pub violations: Vec<(usize, usize)>,
}

/// Error at fixed large `n` must not increase with `M` beyond
/// `2√(se_k² + se_{k+1}²)` between consecutive batch sizes.
pub fn audit_batch_floor(points: &[FloorPoint]) -> BatchFloorAudit {
    let mut sorted = points.to_vec();
    sorted.sort_by_key(|p| p.batch_size);
    let violations: Vec<(usize, usize)> = sorted
        .windows(2)
        .filter(|w| w[1].lp_error - w[0].lp_error > 2.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt())
        .map(|w| (w[0].batch_size, w[1].batch_size))
        .collect();
    BatchFloorAudit {
        holds: violations.is_empty(),
        violations,
    }
}

/// Writes `experiment.csv` plus one two-column `(γ_n, lp_error)` file per series.
pub fn write_outputs(sweep: &SweepResult, out_dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let io = |path: &Path| {
        let p = path.display().to_string();
        move |source| Error::Io { path: p, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let mut written = Vec::new();
    let csv_path = out_dir.join(format!("{}.csv", sweep.experiment_id));
    fs::write(&csv_path, sweep.csv()).map_err(io(&csv_path))?;
    written.push(csv_path);
    for s in &sweep.series {
        let mut body = String::from("# gamma_n lp_error\n");
        for (g, e) in s.rate_points() {
            let _ = writeln!(body, "{} {}", num(g), num(e));
        }
        let path = out_dir.join(format!(
            "{}_M{}_b1_{}_b2_{}.dat",
            sweep.experiment_id, s.batch_size, s.beta.beta1, s.beta.beta2
        ));
        fs::write(&path, body).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}
