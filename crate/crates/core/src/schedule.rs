//! Step-size schedules `γ_n` and their admissibility checks.
//!
//! Admissibility asks for a non-increasing positive sequence with
//! `(γ_n)⁻²(γ_n − γ_{n+1}) → 0` and `Σ_{m≥n} γ_m^p → 0`. For the polynomial
//! family `γ_n = γ₁ n^{−ρ}` both limits are decided in closed form; tabulated
//! schedules only get finite-n diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Indices at which the finite-n proxies are reported.
pub const PROXY_POINTS: [u64; 3] = [100, 10_000, 1_000_000];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSchedule {
    pub gamma1: f64,
    pub exponent: f64,
}

impl PolynomialSchedule {
    /// `exponent` may be any positive value so that non-admissible members
    /// (`exponent ≥ 1`) can still be built and rejected by the validator.
    pub fn new(gamma1: f64, exponent: f64) -> Result<Self> {
        if !(gamma1.is_finite() && gamma1 > 0.0) {
            return Err(Error::domain(format!("gamma1 must be positive, got {gamma1}")));
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::domain(format!("schedule exponent must be positive, got {exponent}")));
        }
        Ok(PolynomialSchedule { gamma1, exponent })
    }

    #[inline]
    pub fn gamma_unchecked(&self, n: u64) -> f64 {
        self.gamma1 * (n as f64).powf(-self.exponent)
    }

    /// `γ_n − γ_{n+1}` without cancellation.
    pub fn decrement(&self, n: u64) -> f64 {
        -self.gamma_unchecked(n) * (-self.exponent * (1.0 / n as f64).ln_1p()).exp_m1()
    }

    /// `Σ_{n≥1} γ_n²`: exact partial sum to `10⁶` plus the integral bound
    /// `γ₁² ∫_{10⁶}^∞ x^{−2ρ} dx` on the tail. Infinite when `2ρ ≤ 1`.
    pub fn sum_of_squares(&self) -> f64 {
        const CUT: u64 = 1_000_000;
        let s = 2.0 * self.exponent;
        if s <= 1.0 {
            return f64::INFINITY;
        }
        let partial: f64 = (1..=CUT).map(|n| self.gamma_unchecked(n).powi(2)).sum();
        let tail = self.gamma1 * self.gamma1 * (CUT as f64).powf(1.0 - s) / (s - 1.0);
        partial + tail
    }

    /// `∫_n^∞ γ₁^p x^{−ρp} dx`, an upper bound for `Σ_{m>n} γ_m^p`.
    pub fn tail_power_sum(&self, n: u64, p: f64) -> f64 {
        let s = self.exponent * p;
        if s <= 1.0 {
            return f64::INFINITY;
        }
        self.gamma1.powf(p) * (n as f64).powf(1.0 - s) / (s - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Schedule {
    Polynomial {
        gamma1: f64,
        exponent: f64,
    },
    /// `γ_n = values[n − 1]`; defined only for `n ≤ values.len()`.
    Tabulated { values: Vec<f64> },
}

impl Schedule {
    pub fn polynomial(gamma1: f64, exponent: f64) -> Result<Self> {
        PolynomialSchedule::new(gamma1, exponent)?;
        Ok(Schedule::Polynomial { gamma1, exponent })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Schedule::Polynomial { gamma1, exponent } => PolynomialSchedule::new(*gamma1, *exponent).map(|_| ()),
            Schedule::Tabulated { values } => {
                if values.is_empty() {
                    return Err(Error::input("tabulated schedule is empty"));
                }
                if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                    return Err(Error::domain("tabulated schedule values must be positive"));
                }
                Ok(())
            }
        }
    }

    pub fn as_polynomial(&self) -> Option<PolynomialSchedule> {
        match *self {
            Schedule::Polynomial { gamma1, exponent } => Some(PolynomialSchedule { gamma1, exponent }),
            Schedule::Tabulated { .. } => None,
        }
    }

    pub fn gamma(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::input("step sizes are indexed from n = 1"));
        }
        match self {
            Schedule::Polynomial { gamma1, exponent } => Ok(gamma1 * (n as f64).powf(-exponent)),
            Schedule::Tabulated { values } => values
                .get((n - 1) as usize)
                .copied()
                .ok_or_else(|| Error::input(format!("tabulated schedule has no entry for n = {n}"))),
        }
    }

    pub fn gamma1(&self) -> f64 {
        match self {
            Schedule::Polynomial { gamma1, .. } => *gamma1,
            Schedule::Tabulated { values } => values[0],
        }
    }

    /// Number of steps the schedule can serve (`u64::MAX` when unbounded).
    pub fn horizon(&self) -> u64 {
        match self {
            Schedule::Polynomial { .. } => u64::MAX,
            Schedule::Tabulated { values } => values.len() as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyPoint {
    pub n: u64,
    /// `(γ_n)⁻²(γ_n − γ_{n+1})`.
    pub decrement_ratio: f64,
    /// Tail `Σ_{m≥n} γ_m^p` (integral bound for the polynomial family,
    /// truncated table sum for tabulated schedules).
    pub tail_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub verdict: Verdict,
    /// Whether `(γ_n)⁻²(γ_n − γ_{n+1}) → 0`; `None` when undecidable.
    pub decrement_condition: Option<bool>,
    /// Whether `Σ γ_n^p < ∞`; `None` when undecidable.
    pub tail_condition: Option<bool>,
    pub proxies: Vec<ProxyPoint>,
    pub notes: Vec<String>,
}

/// Decides admissibility of `schedule` for moment exponent `p_moment`.
pub fn validate_schedule(schedule: &Schedule, p_moment: f64) -> Result<ScheduleReport> {
    if !(p_moment.is_finite() && p_moment > 0.0) {
        return Err(Error::domain("p_moment must be positive"));
    }
    schedule.validate()?;
    match schedule {
        Schedule::Polynomial { gamma1, exponent } => {
            let s = PolynomialSchedule {
                gamma1: *gamma1,
                exponent: *exponent,
            };
            let decrement_ok = *exponent < 1.0;
            let tail_ok = exponent * p_moment > 1.0;
            let proxies = PROXY_POINTS
                .iter()
                .map(|&n| {
                    let g = s.gamma_unchecked(n);
                    ProxyPoint {
                        n,
                        decrement_ratio: s.decrement(n) / (g * g),
                        tail_sum: g.powf(p_moment) + s.tail_power_sum(n, p_moment),
                    }
                })
                .collect();
            let mut notes = Vec::new();
            if !decrement_ok {
                notes.push(format!(
                    "exponent {exponent} >= 1: (γ_n)^-2(γ_n - γ_(n+1)) does not vanish"
                ));
            }
            if !tail_ok {
                notes.push(format!(
                    "exponent * p = {} <= 1: Σ γ_n^p diverges",
                    exponent * p_moment
                ));
            }
            Ok(ScheduleReport {
                verdict: if decrement_ok && tail_ok { Verdict::Accept } else { Verdict::Reject },
                decrement_condition: Some(decrement_ok),
                tail_condition: Some(tail_ok),
                proxies,
                notes,
            })
        }
        Schedule::Tabulated { values } => {
            let mut notes = Vec::new();
            let increasing = values.windows(2).position(|w| w[1] > w[0]);
            if let Some(i) = increasing {
                notes.push(format!("γ increases between n = {} and n = {}", i + 1, i + 2));
            }
            let proxies = PROXY_POINTS
                .iter()
                .filter(|&&n| (n as usize) < values.len())
                .map(|&n| {
                    let i = (n - 1) as usize;
                    let g = values[i];
                    ProxyPoint {
                        n,
                        decrement_ratio: (g - values[i + 1]) / (g * g),
                        tail_sum: values[i..].iter().map(|v| v.powf(p_moment)).sum(),
                    }
                })
                .collect();
            notes.push("asymptotic conditions cannot be decided from finitely many values".into());
            Ok(ScheduleReport {
                verdict: if increasing.is_some() { Verdict::Reject } else { Verdict::Inconclusive },
                decrement_condition: None,
                tail_condition: None,
                proxies,
                notes,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        let s = Schedule::polynomial(0.5, 2.0 / 3.0).unwrap();
        assert_eq!(s.gamma(1).unwrap(), 0.5);
        assert!((s.gamma(8).unwrap() - 0.125).abs() < 1e-15);
        let s = Schedule::polynomial(1.0, 0.5).unwrap();
        assert_eq!(s.gamma(4).unwrap(), 0.5);
        assert!(matches!(s.gamma(0), Err(Error::Input(_))));
    }

    #[test]
    fn validator_examples() {
        let accept = validate_schedule(&Schedule::polynomial(0.5, 2.0 / 3.0).unwrap(), 3.0).unwrap();
        assert_eq!(accept.verdict, Verdict::Accept);
        let r = validate_schedule(&Schedule::polynomial(0.5, 1.0).unwrap(), 3.0).unwrap();
        assert_eq!(r.verdict, Verdict::Reject);
        assert_eq!(r.decrement_condition, Some(false));
        // n² Δγ_n / γ₁ → 1 for ρ = 1
        let last = r.proxies.last().unwrap();
        assert!((last.decrement_ratio * 0.5 - 1.0).abs() < 1e-5);
        let r = validate_schedule(&Schedule::polynomial(0.5, 0.2).unwrap(), 3.0).unwrap();
        assert_eq!(r.verdict, Verdict::Reject);
        assert_eq!(r.tail_condition, Some(false));
        assert!(r.proxies[0].tail_sum.is_infinite());
    }

    #[test]
    fn decrement_matches_direct_difference() {
        let s = PolynomialSchedule::new(0.3, 0.7).unwrap();
        for n in [1u64, 2, 10, 1000] {
            let direct = s.gamma_unchecked(n) - s.gamma_unchecked(n + 1);
            assert!((s.decrement(n) - direct).abs() <= 1e-12 * direct.abs().max(1e-300) + 1e-18);
        }
    }

    #[test]
    fn sum_of_squares_bracket() {
        // Σ n^{-2} = π²/6; the tail integral overshoots slightly
        let s = PolynomialSchedule::new(1.0, 1.0).unwrap();
        let v = s.sum_of_squares();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!(v >= exact && v - exact < 1e-6);
        assert!(PolynomialSchedule::new(1.0, 0.5).unwrap().sum_of_squares().is_infinite());
    }

    #[test]
    fn tabulated_is_inconclusive_or_rejected() {
        let s = Schedule::Tabulated {
            values: (1..=200).map(|n| 1.0 / n as f64).collect(),
        };
        let r = validate_schedule(&s, 2.0).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.proxies.len(), 1);
        let s = Schedule::Tabulated {
            values: vec![1.0, 0.5, 0.6],
        };
        assert_eq!(validate_schedule(&s, 2.0).unwrap().verdict, Verdict::Reject);
        assert!(Schedule::Tabulated { values: vec![1.0] }.gamma(2).is_err());
    }
}
