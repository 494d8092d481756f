//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::time::Instant;

use adam_apriori::bounds::{increment_bound_check, log_beta_threshold, log_beta_upper, v_ratio_holds};
use adam_apriori::config::RunConfig;
use adam_apriori::data::{DataSpec, Distribution};
use adam_apriori::experiments::{audit_pathwise_bound, BetaPair, Execution, SweepResult};
use adam_apriori::schedule::{validate_schedule, Schedule, Verdict};
use adam_apriori::sop::{certify_constants, Problem};
use common::{central_diff, close, dot, problems, sub};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn config(name: &str) -> RunConfig {
    let path = format!("{}/examples/{name}.json", env!("CARGO_MANIFEST_DIR"));
    RunConfig::load(Path::new(&path)).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn sweep(cfg: &RunConfig) -> SweepResult {
    cfg.experiment(false)
        .and_then(|e| e.run_sweep(Execution::Parallel))
        .unwrap_or_else(|e| panic!("{}: {e}", cfg.experiment_id))
}

fn lifted_probe(p: &Problem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    p.lifted_box().iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect()
}

fn theta_probe(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()
}

fn gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for (_, p) in problems() {
        for _ in 0..1000 {
            let theta = theta_probe(p.dim_theta(), &mut rng);
            let z = lifted_probe(&p, &mut rng);
            let g = p.grad_theta(&theta, &z).unwrap();
            let gx = p.grad_x(&theta, &z).unwrap();
            let mut check = |fd: f64, exact: f64| {
                worst = worst.max((fd - exact).abs() / 1f64.max(fd.abs()).max(exact.abs()));
                failures += usize::from(!close(fd, exact, 1e-6));
            };
            for k in 0..theta.len() {
                check(central_diff(|t| p.loss(t, &z).unwrap(), &theta, k, h), g[k]);
            }
            for k in 0..z.len() {
                check(central_diff(|zz| p.loss(&theta, zz).unwrap(), &z, k, h), gx[k]);
            }
        }
    }
    (failures == 0, format!("3 problems × 1000 probes, {failures} failures, worst relative error {worst:.2e}"))
}

fn strong_convexity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut min_slack = f64::INFINITY;
    for (_, p) in problems() {
        let data = DataSpec {
            dim_data: p.dim_data(),
            p_box: p.p_box(),
            distribution: Distribution::UniformBox,
            seed: 202,
        };
        let kappa = certify_constants(&p, &data, 1000).unwrap().kappa;
        for _ in 0..10_000 {
            let a = theta_probe(p.dim_theta(), &mut rng);
            let b = theta_probe(p.dim_theta(), &mut rng);
            let z = lifted_probe(&p, &mut rng);
            let diff = sub(&a, &b);
            let gd = sub(&p.grad_theta(&a, &z).unwrap(), &p.grad_theta(&b, &z).unwrap());
            min_slack = min_slack.min(dot(&diff, &gd) - kappa * dot(&diff, &diff));
        }
    }
    (min_slack >= -1e-9, format!("3 problems × 10000 probes, min slack {min_slack:.3e}"))
}

fn v_ratio_grid() -> Outcome {
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for ai in 1..=9 {
        let alpha = ai as f64 / 10.0;
        let mut betas: Vec<f64> = (1..)
            .map(|k| alpha * alpha + 0.01 + 0.05 * k as f64)
            .take_while(|&b| b < 0.999)
            .collect();
        betas.push(0.999);
        for &beta in &betas {
            let start = (log_beta_threshold(alpha, beta).ceil() as u64).max(2);
            for &v in &[0.0, 0.1, 1.0, 10.0, 100.0] {
                for &eps in &[1e-3, 0.1, 1.0] {
                    for n in start..=start + 20 {
                        cases += 1;
                        if !v_ratio_holds(alpha, beta, eps, n, v).unwrap() {
                            failures.push((alpha, beta, eps, n, v));
                        }
                    }
                }
            }
        }
    }
    (failures.is_empty(), format!("{cases} cases, {} failures {:?}", failures.len(), failures.first()))
}

fn increment_audit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut failures = 0usize;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..1000 {
        let alpha = rng.gen_range(0.0..0.99);
        let beta = rng.gen_range(alpha * alpha + 1e-3..0.9999);
        let eps = 10f64.powf(rng.gen_range(-3.0..0.0));
        let scale = 10f64.powf(rng.gen_range(-2.0..3.0));
        let xs: Vec<f64> = (0..200).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        let check = increment_bound_check(alpha, beta, eps, 0.0, 0.0, &xs).unwrap();
        let max_rhs = check.rhs.iter().copied().fold(0.0, f64::max);
        worst_ratio = worst_ratio.max(check.max_lhs / max_rhs);
        failures += usize::from(!check.holds);
    }
    (failures == 0, format!("1000 sequences × 200 steps, {failures} failures, max lhs/rhs {worst_ratio:.3}"))
}

fn log_beta_grid() -> Outcome {
    let mut cases = 0usize;
    let mut failures = 0usize;
    for ai in 0..100 {
        let alpha = ai as f64 / 100.0;
        for bi in 1..1000 {
            let beta = alpha * alpha + (1.0 - alpha * alpha) * bi as f64 / 1000.0;
            cases += 1;
            failures += usize::from(log_beta_upper(alpha, beta).is_err());
        }
    }
    (failures == 0, format!("{cases} grid points, {failures} failures"))
}

fn pathwise(run: &SweepResult) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for s in &run.series {
        let audit = audit_pathwise_bound(s);
        ok &= audit.holds && s.bound_b.is_finite();
        let (first, last) = (s.row_at(100).unwrap(), s.row_at(10_000).unwrap());
        let decreasing = first.lp_error - last.lp_error
            > 2.0 * (first.lp_error_stderr.powi(2) + last.lp_error_stderr.powi(2)).sqrt();
        ok &= decreasing;
        detail.push(format!(
            "M={} R={}: max sup/B = {:.3e} (B = {:.3e}), error 1e2 → 1e4: {:.3e} → {:.3e}",
            s.batch_size,
            s.sup_norms.len(),
            audit.max_ratio,
            s.bound_b,
            first.lp_error,
            last.lp_error
        ));
    }
    (ok, detail.join("; "))
}

fn uniform_in_beta() -> Outcome {
    let cfg = config("uniform_beta_2d");
    let q = cfg.plan.q_floor;
    let grid = cfg.beta_grid(false);
    let edge = BetaPair::new((0.999f64 - q).sqrt() - 0.01, 0.999);
    let has_edge = grid
        .iter()
        .any(|b| b.beta2 == 0.999 && (b.beta1 - edge.beta1).abs() < 1e-9);
    let admissible = grid.iter().all(|b| b.in_region(q));
    let run = sweep(&cfg);
    let report = run.report(cfg.adam.eps, common::norm(&cfg.plan.theta0));
    let Some(u) = report.uniform else {
        return (false, "envelope fit failed".into());
    };
    let dominated = u.slack.iter().all(|s| s.2 >= 0.0);
    let ok = grid.len() == 25 && has_edge && admissible && u.c.is_finite() && dominated && u.max_sup_norm < 1e3;
    (
        ok,
        format!(
            "{} pairs (edge pair present: {has_edge}, admissible: {admissible}), c = {:.4e}, max sup-norm {:.4}",
            grid.len(),
            u.c,
            u.max_sup_norm
        ),
    )
}

fn rate_and_floor() -> (Outcome, Outcome) {
    let cfg = config("rate_2d");
    let run = sweep(&cfg);
    let report = run.report(cfg.adam.eps, common::norm(&cfg.plan.theta0));
    let beta = BetaPair::new(0.9, 0.999);
    let rate = match report.fits.iter().find(|f| f.batch_size == 64 && f.beta == beta).and_then(|f| f.fit) {
        Some(f) => (
            (0.35..=0.65).contains(&f.slope) && f.r2 >= 0.9,
            format!("M=64: slope {:.4}, R² {:.4}, c_beta {:.4e}", f.slope, f.r2, f.coefficient),
        ),
        None => (false, "M=64 fit unavailable".into()),
    };
    let errs: Vec<String> = cfg
        .plan
        .batch_sizes
        .iter()
        .filter_map(|&m| run.series(m, beta).and_then(|s| s.row_at(100_000)).map(|r| (m, r)))
        .map(|(m, r)| format!("M={m}: {:.4e} ± {:.1e}", r.lp_error, r.lp_error_stderr))
        .collect();
    let floor = match report.batch_floor.iter().find(|(b, _)| *b == beta) {
        Some((_, a)) => (a.holds, format!("n=1e5: {} (violations {:?})", errs.join(", "), a.violations)),
        None => (false, "no floor audit".into()),
    };
    (rate, floor)
}

fn schedule_validator() -> Outcome {
    let verdict = |rho: f64| validate_schedule(&Schedule::polynomial(0.1, rho).unwrap(), 3.0).unwrap().verdict;
    let (a, b, c) = (verdict(2.0 / 3.0), verdict(1.0), verdict(0.2));
    (
        a == Verdict::Accept && b == Verdict::Reject && c == Verdict::Reject,
        format!("ρ=2/3: {a:?}, ρ=1: {b:?}, ρ=0.2: {c:?}"),
    )
}

fn main() {
    let mut all = true;
    let mut report = |id: u32, name: &str, started: Instant, (ok, detail): Outcome| {
        all &= ok;
        println!(
            "criterion {id:>2} {:<4} {name} [{:.1}s]: {detail}",
            if ok { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
    };

    let t = Instant::now();
    report(1, "gradient finite differences", t, gradients());
    let t = Instant::now();
    report(2, "strong convexity certificate", t, strong_convexity());
    let t = Instant::now();
    report(3, "second-moment ratio grid", t, v_ratio_grid());
    let t = Instant::now();
    report(4, "bounded increments", t, increment_audit());
    let t = Instant::now();
    report(5, "log_beta upper bound", t, log_beta_grid());

    let t = Instant::now();
    let cfg = config("pathwise_2d");
    let first = sweep(&cfg);
    report(6, "pathwise a priori bound", t, pathwise(&first));

    let t = Instant::now();
    report(7, "uniform-in-beta envelope", t, uniform_in_beta());

    let t = Instant::now();
    let (rate, floor) = rate_and_floor();
    report(8, "rate in sqrt(gamma_n)", t, rate);
    report(9, "mini-batch floor", Instant::now(), floor);

    let t = Instant::now();
    let again = sweep(&cfg).csv();
    let same = again == first.csv();
    report(10, "determinism", t, (same, format!("{} CSV bytes, identical: {same}", again.len())));

    let t = Instant::now();
    report(11, "schedule validator", t, schedule_validator());

    if !all {
        std::process::exit(1);
    }
}
