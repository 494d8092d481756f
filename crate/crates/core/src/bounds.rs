//! Explicit a priori bounds for Adam on strongly convex problems.
//!
//! [`compute_constants`] evaluates the full constant ladder
//! `η, Γ, N, 𝔫, δ, χ, 𝒜₁…𝒜₆, 𝐀` and the pathwise bound
//! `B = ‖ϑ‖ + √(2κ⁻¹ 𝐀 (1 + Γ))` verbatim, however loose the result. The
//! remaining functions are standalone oracles for the auxiliary inequalities
//! the bound rests on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// Largest `N` the threshold search will consider.
pub const N_SEARCH_CAP: u64 = 1_000_000_000;

/// Relative slack used when checking exact inequalities in floating point.
const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// `β₁`.
    pub alpha: f64,
    /// `β₂`.
    pub beta: f64,
    pub eps: f64,
    pub d: usize,
    pub tau1: f64,
    pub tau2: f64,
    pub kappa: f64,
    pub big_k: f64,
    pub c_data: f64,
    pub rho: f64,
    /// `𝐌 ≥ |m₀,ᵢ|`.
    pub m_init_bound: f64,
    /// `𝒱` with `v₀,ᵢ ≤ 𝒱²`.
    pub v_init_bound: f64,
    pub gamma1: f64,
    pub schedule: Schedule,
    /// `‖Θ₀ − ϑ‖`.
    pub theta0_dist: f64,
    /// `‖ϑ‖`.
    pub theta_star_norm: f64,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.alpha, self.beta);
        if !(0.0..1.0).contains(&a) {
            return Err(Error::domain(format!("beta1 = {a} outside [0, 1)")));
        }
        if !(b > a * a && b < 1.0) {
            return Err(Error::domain(format!("beta2 = {b} must lie in (beta1², 1) = ({}, 1)", a * a)));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::domain("eps must be positive"));
        }
        if self.d == 0 {
            return Err(Error::input("d must be positive"));
        }
        let (t1, t2) = (self.tau1, self.tau2);
        if !(t1 >= 0.0 && t2 >= 0.0) {
            return Err(Error::domain("growth exponents must be nonnegative"));
        }
        if 3.0 * t1 + 2.0 * t2 + t1 * t1 + 2.0 * t1 * t2 >= 2.0 {
            return Err(Error::domain(format!("3τ₁+2τ₂+τ₁²+2τ₁τ₂ ≥ 2 for τ₁ = {t1}, τ₂ = {t2}")));
        }
        if t1 + 2.0 * t2 >= 1.0 {
            return Err(Error::domain(format!("τ₁+2τ₂ ≥ 1 for τ₁ = {t1}, τ₂ = {t2}")));
        }
        for (name, v) in [("kappa", self.kappa), ("big_k", self.big_k)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive")));
            }
        }
        if !(self.c_data >= 1.0 && self.c_data.is_finite()) {
            return Err(Error::domain("c_data must be at least 1"));
        }
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return Err(Error::domain("rho must be at least 1"));
        }
        for (name, v) in [
            ("m_init_bound", self.m_init_bound),
            ("v_init_bound", self.v_init_bound),
            ("theta0_dist", self.theta0_dist),
            ("theta_star_norm", self.theta_star_norm),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be nonnegative")));
            }
        }
        self.schedule.validate()?;
        let g1 = self.schedule.gamma(1)?;
        if (g1 - self.gamma1).abs() > 1e-12 * g1 {
            return Err(Error::input(format!("gamma1 = {} disagrees with the schedule's γ₁ = {g1}", self.gamma1)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub eta: f64,
    pub big_gamma: f64,
    pub n_threshold: u64,
    pub n_frak: u64,
    pub delta: f64,
    pub chi: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub big_a: f64,
    pub bound_b: f64,
    /// `4 / (2 − 3τ₁ − 2τ₂ − τ₁² − 2τ₁τ₂)`; `B` is very sensitive to it.
    pub a5_exponent: f64,
    /// `2 / (1 − τ₁ − 2τ₂)`.
    pub a6_exponent: f64,
}

impl BoundConstants {
    /// `(name, value)` pairs in evaluation order, for reports.
    pub fn ladder(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("eta", self.eta),
            ("Gamma", self.big_gamma),
            ("N", self.n_threshold as f64),
            ("n_frak", self.n_frak as f64),
            ("delta", self.delta),
            ("chi", self.chi),
            ("A1", self.a1),
            ("A2", self.a2),
            ("A3", self.a3),
            ("A4", self.a4),
            ("A5", self.a5),
            ("A6", self.a6),
            ("A", self.big_a),
            ("B", self.bound_b),
            ("A5_exponent", self.a5_exponent),
            ("A6_exponent", self.a6_exponent),
        ]
    }
}

/// `log_β((β − α²)/(1 − α²))`, the index after which the second-moment
/// estimate dominates the momentum.
pub fn log_beta_threshold(alpha: f64, beta: f64) -> f64 {
    ((beta - alpha * alpha) / (1.0 - alpha * alpha)).ln() / beta.ln()
}

/// Smallest `n` with `αⁿ ≤ 1/2` (1 when `α = 0`).
pub fn half_decay_index(alpha: f64) -> u64 {
    if alpha == 0.0 {
        1
    } else {
        (0.5f64.ln() / alpha.ln()).ceil().max(1.0) as u64
    }
}

fn threshold_quantity(inp: &BoundInputs, eta: f64, gamma_n: f64) -> f64 {
    let d = inp.d as f64;
    let k = inp.big_k;
    let first = k / inp.eps * gamma_n * (3.0 + (inp.gamma1 * eta / d).powf(inp.tau1));
    let second = 2.0 * k * inp.c_data * d.sqrt() * (1.0 + inp.tau2) * (2.0 * gamma_n / inp.eps).powf(1.0 + inp.tau2);
    first.max(second)
}

/// Smallest `N` such that the step-size quantity stays `≤ 1/8` for all `n ≥ N`.
fn find_threshold(inp: &BoundInputs, eta: f64) -> Result<u64> {
    let ok = |n: u64| -> Result<bool> { Ok(threshold_quantity(inp, eta, inp.schedule.gamma(n)?) <= 0.125) };
    match &inp.schedule {
        Schedule::Polynomial { .. } => {
            // γ is non-increasing, so the condition is monotone in n:
            // gallop to a passing index, then bisect.
            let mut hi = 1u64;
            while !ok(hi)? {
                if hi >= N_SEARCH_CAP {
                    return Err(Error::numerical(format!("threshold N exceeds the search cap {N_SEARCH_CAP}")));
                }
                hi = (hi * 2).min(N_SEARCH_CAP);
            }
            let mut lo = hi / 2; // fails (or is 0)
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if ok(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(hi)
        }
        Schedule::Tabulated { values } => {
            // the sup runs over the table only; scan backwards
            let mut n = values.len() as u64;
            if !ok(n)? {
                return Err(Error::numerical("step-size condition fails at the end of the tabulated schedule"));
            }
            while n > 1 && ok(n - 1)? {
                n -= 1;
            }
            Ok(n)
        }
    }
}

fn sum_gamma_squared(schedule: &Schedule) -> f64 {
    match schedule {
        Schedule::Polynomial { .. } => schedule.as_polynomial().map_or(f64::INFINITY, |p| p.sum_of_squares()),
        Schedule::Tabulated { values } => values.iter().map(|g| g * g).sum(),
    }
}

fn finite(name: &str, v: f64, detail: impl FnOnce() -> String) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::numerical(format!("{name} is not finite ({v}); {}", detail())))
    }
}

/// Evaluates the full constant ladder and the bound `B`.
pub fn compute_constants(inp: &BoundInputs) -> Result<BoundConstants> {
    inp.validate()?;
    let (alpha, beta, eps) = (inp.alpha, inp.beta, inp.eps);
    let d = inp.d as f64;
    let (t1, t2) = (inp.tau1, inp.tau2);
    let (kappa, k, c, rho) = (inp.kappa, inp.big_k, inp.c_data, inp.rho);
    let (mb, vb, g1) = (inp.m_init_bound, inp.v_init_bound, inp.gamma1);
    let (th0, th) = (inp.theta0_dist, inp.theta_star_norm);

    // exponents first: they decide whether anything below can be finite
    let a5_den = 2.0 - 3.0 * t1 - 2.0 * t2 - t1 * t1 - 2.0 * t1 * t2;
    let a5_exponent = 4.0 / a5_den;
    let a6_exponent = 2.0 / (1.0 - t1 - 2.0 * t2);

    let m_term = mb * d / (eps * (1.0 - alpha));
    let eta = d / ((beta - alpha * alpha) * (1.0 / beta - 1.0)).sqrt() + m_term;
    let big_gamma = if t1 == 0.0 {
        0.0
    } else {
        finite("Gamma", t1 * eta * eta * sum_gamma_squared(&inp.schedule), || {
            "Σγ_n² diverges".into()
        })?
    };

    let n_threshold = find_threshold(inp, eta)?;
    let log_term = if alpha == 0.0 { 0.0 } else { -alpha.log2() };
    let n_frak = (n_threshold as f64)
        .max(log_term)
        .max(log_beta_threshold(alpha, beta))
        .ceil() as u64;

    let delta = (n_frak as f64).sqrt() * d / (1.0 - alpha * alpha / beta).sqrt() + m_term;
    let chi = (alpha / (1.0 - alpha)).max(4.0);

    let reach = n_frak as f64 * g1 * delta + th0;
    let growth = 1.0 + reach.powf(t1) + 2.0 * th.powf(t1);
    let a1 = k / 2.0 * reach * reach * growth
        + d / (2.0 * (1.0 - alpha)) * (k * reach * growth + rho + mb) * g1 * delta;

    let a2 = [
        8.0 * (1.0 + big_gamma) * k * k / (kappa * d * d),
        kappa / 2.0,
        kappa * th * th / 2.0,
        rho * rho * kappa / (2.0 * k * k),
        kappa * (vb * vb / (k * k * (1.0 - beta))).powf(1.0 / (1.0 + t1)),
        kappa * (eps / k).powf(2.0 / (1.0 + t1)),
        ((1.0 + 32.0 * k * k * c * c) / (k * k * c * c)).powf(1.0 / t2) * kappa,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    let a2 = finite("A2", a2, || format!("τ₂ = {t2} enters as the exponent 1/τ₂"))?;

    let s = 1.0 + t1 + 2.0 * t2;
    let a3 = rho.powf(4.0 / s) * kappa / (chi * d / eps * c * c).powf(2.0 / s);

    let a4 = (1610.0
        * (1.0 + g1)
        * k.powf(1.5)
        * kappa.powf(-(5.0 + t1 + 2.0 * t2) / 4.0)
        * (1.0 + kappa)
        * c
        * eps.powf(-1.5)
        * (1.0 + eps)
        * (1.0 + chi.sqrt())
        * d
        * (1.0 + big_gamma).powf(s / 4.0))
    .max(1.0);
    let a5 = (k * (1.0 + th.powf(t1)) * a4.powf(2.0 + t1)).powf(a5_exponent);
    let a5 = finite("A5", a5, || format!("exponent 4/(2−3τ₁−2τ₂−τ₁²−2τ₁τ₂) = {a5_exponent}"))?;

    let a6 = (328000.0 / (1.0 - alpha)
        * g1
        * k.powi(3)
        * kappa.powf(-s / 2.0)
        * c
        * c
        * d
        / (eps * eps)
        * (1.0 + big_gamma).powf(s / 2.0))
    .powf(a6_exponent);
    let a6 = finite("A6", a6, || format!("exponent 2/(1−τ₁−2τ₂) = {a6_exponent}"))?;

    let big_a = [1.0, a1, a2, a3, a5, a6].into_iter().fold(f64::NEG_INFINITY, f64::max);
    let bound_b = th + (2.0 / kappa * big_a * (1.0 + big_gamma)).sqrt();
    let bound_b = finite("B", bound_b, || "the ladder overflowed".into())?;

    Ok(BoundConstants {
        eta,
        big_gamma,
        n_threshold,
        n_frak,
        delta,
        chi,
        a1,
        a2,
        a3,
        a4,
        a5,
        a6,
        big_a,
        bound_b,
        a5_exponent,
        a6_exponent,
    })
}

/// The pathwise bound `B` alone.
pub fn apriori_bound(inputs: &BoundInputs) -> Result<f64> {
    compute_constants(inputs).map(|c| c.bound_b)
}

/// `B` from its last two ingredients: `‖ϑ‖ + √(2κ⁻¹ 𝐀 (1 + Γ))`.
pub fn bound_from_parts(kappa: f64, big_a: f64, big_gamma: f64, theta_star_norm: f64) -> f64 {
    theta_star_norm + (2.0 / kappa * big_a * (1.0 + big_gamma)).sqrt()
}

fn check_moment_pair(alpha: f64, beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::input(format!("alpha = {alpha} outside [0, 1)")));
    }
    if !(beta > alpha * alpha && beta < 1.0) {
        return Err(Error::input(format!("beta = {beta} outside (alpha², 1)")));
    }
    Ok(())
}

/// Shape of the uniform-in-`β` bound:
/// `c(1−α)^{−1/2}‖Θ₀‖ + c|ln(α + 𝟙₀(α))|² + c(β−α²)⁻² + c(1−α)⁻²`.
pub fn uniform_bound_rhs(alpha: f64, beta: f64, eps: f64, theta0_norm: f64, c: f64) -> Result<f64> {
    check_moment_pair(alpha, beta)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::input(format!("eps = {eps} outside (0, 1)")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::input("c must be positive"));
    }
    if !(theta0_norm >= 0.0 && theta0_norm.is_finite()) {
        return Err(Error::input("theta0_norm must be nonnegative"));
    }
    let log = if alpha == 0.0 { 0.0 } else { alpha.ln() };
    Ok(c * theta0_norm / (1.0 - alpha).sqrt()
        + c * log * log
        + c / (beta - alpha * alpha).powi(2)
        + c / (1.0 - alpha).powi(2))
}

/// `max{4(1−α)⁻¹, 2(β−α²)⁻¹}`, after checking that it dominates
/// `log_β((β−α²)/(1−α²))`.
pub fn log_beta_upper(alpha: f64, beta: f64) -> Result<f64> {
    check_moment_pair(alpha, beta)?;
    let bound = (4.0 / (1.0 - alpha)).max(2.0 / (beta - alpha * alpha));
    let exact = log_beta_threshold(alpha, beta);
    if exact > bound {
        return Err(Error::numerical(format!(
            "log_β threshold {exact} exceeds its upper bound {bound} at α = {alpha}, β = {beta}"
        )));
    }
    Ok(bound)
}

/// Whether
/// `α(ε+√(βv/(1−βⁿ)))⁻¹(1−αⁿ)⁻¹ ≤ (ε+√(v/(1−β^{n−1})))⁻¹(1−α^{n−1})⁻¹`.
pub fn v_ratio_holds(alpha: f64, beta: f64, eps: f64, n: u64, v: f64) -> Result<bool> {
    check_moment_pair(alpha, beta)?;
    if !(eps > 0.0) || !(v >= 0.0) || n == 0 {
        return Err(Error::input("need eps > 0, v ≥ 0 and n ≥ 1"));
    }
    if alpha == 0.0 {
        return Ok(true);
    }
    if n < 2 {
        return Err(Error::input("the right-hand side needs n ≥ 2 when alpha > 0"));
    }
    let p = |x: f64, k: u64| 1.0 - x.powf(k as f64);
    let lhs = alpha / (eps + (beta * v / p(beta, n)).sqrt()) / p(alpha, n);
    let rhs = 1.0 / (eps + (v / p(beta, n - 1)).sqrt()) / p(alpha, n - 1);
    Ok(lhs <= rhs * (1.0 + ROUNDING_SLACK))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncrementCheck {
    pub max_lhs: f64,
    /// Right-hand side for `n = 1, …, len(xs)`.
    pub rhs: Vec<f64>,
    pub holds: bool,
}

/// Right-hand side of the bounded-increment inequality at step `n`.
pub fn increment_rhs(alpha: f64, beta: f64, eps: f64, n: u64, m0_abs: f64) -> f64 {
    let geo = (1.0 - beta.powf(n as f64)) / (1.0 - beta);
    geo.sqrt() / (1.0 - alpha * alpha / beta).sqrt() + m0_abs / (eps * (1.0 - alpha))
}

/// Runs the scalar moment recursions on `xs` and checks the normalized
/// step `|m_n|/(1−αⁿ)·(ε+√(V_n/(1−βⁿ)))⁻¹` against [`increment_rhs`].
pub fn increment_bound_check(alpha: f64, beta: f64, eps: f64, m0: f64, v0: f64, xs: &[f64]) -> Result<IncrementCheck> {
    check_moment_pair(alpha, beta)?;
    if !(eps > 0.0) || !(v0 >= 0.0) {
        return Err(Error::input("need eps > 0 and v0 ≥ 0"));
    }
    let (mut m, mut v) = (m0, v0);
    let mut max_lhs: f64 = 0.0;
    let mut rhs = Vec::with_capacity(xs.len());
    let mut holds = true;
    for (i, &x) in xs.iter().enumerate() {
        let n = i as u64 + 1;
        m = alpha * m + (1.0 - alpha) * x;
        v = beta * v + (1.0 - beta) * x * x;
        let lhs = m.abs() / (1.0 - alpha.powf(n as f64)) / (eps + (v / (1.0 - beta.powf(n as f64))).sqrt());
        let r = increment_rhs(alpha, beta, eps, n, m0.abs());
        holds &= lhs <= r * (1.0 + ROUNDING_SLACK);
        max_lhs = max_lhs.max(lhs);
        rhs.push(r);
    }
    Ok(IncrementCheck { max_lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(alpha: f64, beta: f64, d: usize) -> BoundInputs {
        BoundInputs {
            alpha,
            beta,
            eps: 0.1,
            d,
            tau1: 0.0,
            tau2: 0.25,
            kappa: 2.0,
            big_k: 8.0,
            c_data: 1.5,
            rho: 3.0,
            m_init_bound: 0.0,
            v_init_bound: 0.0,
            gamma1: 0.1,
            schedule: Schedule::polynomial(0.1, 2.0 / 3.0).unwrap(),
            theta0_dist: 0.5,
            theta_star_norm: 0.5,
        }
    }

    #[test]
    fn eta_examples() {
        let c = compute_constants(&inputs(0.0, 0.5, 1)).unwrap();
        assert!((c.eta - 2f64.sqrt()).abs() < 1e-14);
        let c = compute_constants(&inputs(0.9, 0.999, 2)).unwrap();
        let oracle = 2.0 / (0.189f64 * (1.0 / 0.999 - 1.0)).sqrt();
        assert!((c.eta - oracle).abs() < 1e-9 * oracle);
        assert!((c.eta - 145.4).abs() < 0.05, "{}", c.eta);
    }

    #[test]
    fn n_frak_and_chi_for_zero_momentum() {
        let c = compute_constants(&inputs(0.0, 0.5, 1)).unwrap();
        assert_eq!(c.chi, 4.0);
        assert!((log_beta_threshold(0.0, 0.5) - 1.0).abs() < 1e-15);
        assert_eq!(c.n_frak, c.n_threshold.max(1));
        assert_eq!(c.big_gamma, 0.0);
        assert!((c.a5_exponent - 4.0 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn threshold_is_minimal() {
        let inp = inputs(0.9, 0.999, 2);
        let c = compute_constants(&inp).unwrap();
        let q = |n| threshold_quantity(&inp, c.eta, inp.schedule.gamma(n).unwrap());
        assert!(q(c.n_threshold) <= 0.125);
        assert!(c.n_threshold == 1 || q(c.n_threshold - 1) > 0.125);
        // linear-scan oracle
        let linear = (1u64..).find(|&n| q(n) <= 0.125).unwrap();
        assert_eq!(linear, c.n_threshold);
    }

    #[test]
    fn tabulated_threshold_matches_polynomial() {
        let mut inp = inputs(0.9, 0.999, 2);
        let poly = compute_constants(&inp).unwrap();
        inp.schedule = Schedule::Tabulated {
            values: (1..=200_000).map(|n| 0.1 * (n as f64).powf(-2.0 / 3.0)).collect(),
        };
        let tab = compute_constants(&inp).unwrap();
        assert_eq!(poly.n_threshold, tab.n_threshold);
    }

    #[test]
    fn ladder_invariants() {
        for (a, b) in [(0.0, 0.5), (0.5, 0.3), (0.9, 0.999), (0.3, 0.95)] {
            let inp = inputs(a, b, 2);
            let c = compute_constants(&inp).unwrap();
            for (name, v) in c.ladder() {
                assert!(v.is_finite() && v >= 0.0, "{name} = {v}");
            }
            assert!(c.chi >= 4.0);
            assert!(c.n_frak >= c.n_threshold);
            assert!(c.bound_b >= inp.theta_star_norm);
            assert!(c.big_a >= c.a1.max(c.a2).max(c.a3).max(c.a5).max(c.a6).max(1.0));
            let b = bound_from_parts(inp.kappa, c.big_a, c.big_gamma, inp.theta_star_norm);
            assert_eq!(b, c.bound_b);
        }
    }

    #[test]
    fn eta_linear_in_d_without_initial_momentum() {
        let e1 = compute_constants(&inputs(0.6, 0.7, 1)).unwrap().eta;
        let e3 = compute_constants(&inputs(0.6, 0.7, 3)).unwrap().eta;
        assert!((e3 - 3.0 * e1).abs() < 1e-12 * e3);
    }

    #[test]
    fn bound_parts_examples() {
        assert_eq!(bound_from_parts(2.0, 1.0, 0.0, 0.0), 1.0);
        let b1 = bound_from_parts(2.0, 5.0, 0.3, 0.7);
        let b2 = bound_from_parts(2.0, 5.0, 0.3, 1.4);
        assert!((b2 - b1 - 0.7).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(compute_constants(&inputs(0.9, 0.81, 1)), Err(Error::Domain(_))));
        let mut inp = inputs(0.5, 0.5, 1);
        inp.tau2 = 0.5;
        assert!(compute_constants(&inp).is_err());
        inp.tau2 = 0.25;
        inp.gamma1 = 0.2;
        assert!(compute_constants(&inp).is_err());
    }

    #[test]
    fn positive_tau1_gives_positive_gamma() {
        let mut inp = inputs(0.5, 0.5, 1);
        inp.tau1 = 0.1;
        inp.tau2 = 0.3;
        let c = compute_constants(&inp).unwrap();
        let sum = inp.schedule.as_polynomial().unwrap().sum_of_squares();
        assert!((c.big_gamma - 0.1 * c.eta * c.eta * sum).abs() < 1e-12 * c.big_gamma);
        // a divergent series cannot produce a bound
        inp.schedule = Schedule::polynomial(0.1, 0.4).unwrap();
        assert!(matches!(compute_constants(&inp), Err(Error::Numerical(_))));
    }

    #[test]
    fn uniform_rhs_examples() {
        let v = uniform_bound_rhs(0.5, 0.5, 0.1, 0.0, 1.0).unwrap();
        let oracle = 0.5f64.ln().powi(2) + 16.0 + 4.0;
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 20.4805).abs() < 1e-4);
        let z = uniform_bound_rhs(0.0, 0.5, 0.1, 0.0, 1.0).unwrap();
        assert!((z - (4.0 + 1.0)).abs() < 1e-12);
        let v2 = uniform_bound_rhs(0.5, 0.5, 0.1, 0.0, 2.0).unwrap();
        assert!((v2 - 2.0 * v).abs() < 1e-12);
        assert!(uniform_bound_rhs(0.9, 0.8, 0.1, 0.0, 1.0).is_err());
        assert!(uniform_bound_rhs(0.5, 0.5, 1.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn log_beta_examples() {
        assert_eq!(log_beta_upper(0.0, 0.5).unwrap(), 4.0);
        assert!((log_beta_upper(0.9, 0.999).unwrap() - 40.0).abs() < 1e-12);
        let exact = log_beta_threshold(0.9, 0.999);
        assert!((exact - 5.28).abs() < 0.01, "{exact}");
        assert!(log_beta_upper(0.5, 0.2).is_err());
    }

    #[test]
    fn v_ratio_examples() {
        assert!(v_ratio_holds(0.0, 0.5, 1.0, 1, 3.0).unwrap());
        let (a, b, e, v) = (0.5f64, 0.5f64, 1.0, 1.0f64);
        let lhs = a / (e + (b * v / (1.0 - b * b)).sqrt()) / (1.0 - a * a);
        let rhs = 1.0 / (e + (v / (1.0 - b)).sqrt()) / (1.0 - a);
        assert!((lhs - 0.367).abs() < 1e-3 && (rhs - 0.828).abs() < 1e-3);
        assert!(v_ratio_holds(0.5, 0.5, 1.0, 2, 1.0).unwrap());
        assert!(v_ratio_holds(0.5, 0.5, 1.0, 1, 1.0).is_err());
    }

    #[test]
    fn increment_examples() {
        let r = increment_bound_check(0.0, 0.5, 0.1, 0.0, 0.0, &[3.0]).unwrap();
        assert!((r.rhs[0] - 1.0).abs() < 1e-15);
        assert!((r.max_lhs - 3.0 / 3.1).abs() < 1e-12);
        assert!(r.holds);
        let r = increment_bound_check(0.7, 0.9, 0.1, 0.0, 0.0, &[0.0; 20]).unwrap();
        assert_eq!(r.max_lhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn half_decay() {
        assert_eq!(half_decay_index(0.0), 1);
        assert_eq!(half_decay_index(0.5), 1);
        assert_eq!(half_decay_index(0.9), 7);
        assert!(0.9f64.powi(7) <= 0.5 && 0.9f64.powi(6) > 0.5);
    }
}
