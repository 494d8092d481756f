//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::bounds::compute_constants;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiments::{write_outputs, Execution};
use crate::linalg::norm;
use crate::schedule::{validate_schedule, Schedule, Verdict};

#[derive(Debug, Parser)]
#[command(name = "adam-apriori", version, about = "Adam a priori bounds and Monte Carlo error audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured (M, β) series and write CSV and plot data.
    Run(RunArgs),
    /// Like `run`, additionally expanding beta1_values × beta2_values.
    Sweep(RunArgs),
    /// Print the a priori bound constant ladder.
    Bounds(BoundsArgs),
    /// Decide admissibility of a step-size schedule.
    ValidateSchedule(ScheduleArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides output.out_dir from the config.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker count; 1 runs sequentially. Defaults to all cores.
    #[arg(long)]
    pub parallel: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, default_value = "polynomial")]
    pub family: String,
    #[arg(long)]
    pub gamma1: f64,
    #[arg(long)]
    pub exponent: f64,
    #[arg(long, default_value_t = 3.0)]
    pub p_moment: f64,
    #[arg(long)]
    pub json: bool,
}

fn execution(parallel: Option<usize>) -> Execution {
    match parallel {
        None => Execution::Parallel,
        Some(0 | 1) => Execution::Sequential,
        Some(n) => Execution::Threads(n),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

/// Runs one parsed command, writing human or JSON output to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Run(args) => cmd_run(args, false, out),
        Command::Sweep(args) => cmd_run(args, true, out),
        Command::Bounds(args) => cmd_bounds(&args.config, args.json, out),
        Command::ValidateSchedule(args) => cmd_validate_schedule(args, out),
    }
}

pub fn cmd_run(args: &RunArgs, expand_grid: bool, out: &mut dyn Write) -> Result<()> {
    let cfg = RunConfig::load(&args.config)?;
    let exp = cfg.experiment(expand_grid)?;
    let sweep = exp.run_sweep(execution(args.parallel))?;
    let out_dir = args.out_dir.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.out_dir));
    let files = write_outputs(&sweep, &out_dir)?;
    let report = sweep.report(cfg.adam.eps, norm(&cfg.plan.theta0));
    if args.json {
        let doc = json!({ "sweep": sweep, "report": report, "files": files });
        return emit(out, &format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")));
    }
    let mut text = format!(
        "experiment {}  seed {}  theta* = {:?}\n{:>5} {:>8} {:>8} {:>8} {:>12} {:>10} {:>10} {:>10}\n",
        sweep.experiment_id, sweep.seed, sweep.theta_star, "M", "beta1", "beta2", "n", "lp_error", "stderr", "sup_norm", "B"
    );
    for r in sweep.rows() {
        text.push_str(&format!(
            "{:>5} {:>8.4} {:>8.4} {:>8} {:>12.5e} {:>10.3e} {:>10.4} {:>10.3e}\n",
            r.batch_size, r.beta1, r.beta2, r.n, r.lp_error, r.lp_error_stderr, r.sup_norm_max, r.bound_b
        ));
    }
    for f in &report.fits {
        if let Some(fit) = f.fit {
            text.push_str(&format!(
                "fit M={} beta=({}, {}): slope {:.4}, c_beta {:.4e}, R² {:.4}\n",
                f.batch_size, f.beta.beta1, f.beta.beta2, fit.slope, fit.coefficient, fit.r2
            ));
        }
    }
    for (m, b, audit) in &report.pathwise {
        if !audit.holds {
            text.push_str(&format!(
                "pathwise bound VIOLATED for M={m} beta=({}, {}): ratio {:.3e}\n",
                b.beta1, b.beta2, audit.max_ratio
            ));
        }
    }
    text.push_str(&format!("wrote {} files to {}\n", files.len(), out_dir.display()));
    emit(out, &text)
}

pub fn cmd_bounds(config: &Path, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let exp = cfg.experiment(false)?;
    let mut entries = Vec::new();
    for beta in &exp.plan.beta_grid {
        let inputs = exp.bound_inputs(*beta);
        let constants = compute_constants(&inputs)?;
        entries.push((inputs, constants));
    }
    if as_json {
        let doc: Vec<_> = entries
            .iter()
            .map(|(i, c)| json!({ "inputs": i, "constants": c }))
            .collect();
        let doc = json!({ "problem_constants": exp.constants, "ladders": doc });
        return emit(out, &format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")));
    }
    let pc = &exp.constants;
    let mut text = format!(
        "kappa = {:.17e}\nK = {:.17e}\ntau1 = {}\ntau2 = {}\nc = {:.17e}\nrho = {:.17e}\n",
        pc.kappa, pc.big_k, pc.tau1, pc.tau2, pc.c_data, pc.rho
    );
    for (inputs, c) in &entries {
        text.push_str(&format!("\n[beta1 = {}, beta2 = {}]\n", inputs.alpha, inputs.beta));
        for (name, v) in c.ladder() {
            text.push_str(&format!("{name} = {v:.17e}\n"));
        }
    }
    emit(out, &text)
}

pub fn cmd_validate_schedule(args: &ScheduleArgs, out: &mut dyn Write) -> Result<()> {
    let schedule = match args.family.as_str() {
        "polynomial" => Schedule::polynomial(args.gamma1, args.exponent)?,
        other => return Err(Error::config("family", format!("unknown schedule family `{other}`"))),
    };
    let report = validate_schedule(&schedule, args.p_moment)?;
    if args.json {
        return emit(out, &format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")));
    }
    let verdict = match report.verdict {
        Verdict::Accept => "accept",
        Verdict::Reject => "reject",
        Verdict::Inconclusive => "inconclusive",
    };
    let show = |c: Option<bool>| c.map_or("undecided", |b| if b { "holds" } else { "fails" });
    let mut text = format!(
        "{verdict}\ndecrement condition: {}\ntail condition: {}\n",
        show(report.decrement_condition),
        show(report.tail_condition)
    );
    for p in &report.proxies {
        text.push_str(&format!(
            "n = {:>8}: decrement ratio {:.6e}, tail sum {:.6e}\n",
            p.n, p.decrement_ratio, p.tail_sum
        ));
    }
    for note in &report.notes {
        text.push_str(&format!("note: {note}\n"));
    }
    emit(out, &text)
}
