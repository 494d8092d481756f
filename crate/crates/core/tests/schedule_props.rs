use adam_apriori::schedule::{validate_schedule, PolynomialSchedule, Schedule, Verdict};
use proptest::prelude::*;

proptest! {
    #[test]
    fn polynomial_schedule_is_non_increasing(g1 in 1e-3f64..10.0, rho in 0.05f64..1.5, n in 1u64..10_000_000) {
        let s = Schedule::polynomial(g1, rho).unwrap();
        prop_assert!(s.gamma(n + 1).unwrap() <= s.gamma(n).unwrap());
        prop_assert!(s.gamma(n).unwrap() > 0.0);
    }

    #[test]
    fn verdict_follows_exponent_rules(rho in 0.05f64..1.5, p in 0.5f64..6.0) {
        let r = validate_schedule(&Schedule::polynomial(0.5, rho).unwrap(), p).unwrap();
        let expect = rho < 1.0 && rho * p > 1.0;
        prop_assert_eq!(r.verdict == Verdict::Accept, expect);
    }

    // the proxy behaves like ρ n^{ρ−1} / γ₁; γ₁ ≥ 2.5 keeps it ≤ 0.1 at n = 10⁶
    #[test]
    fn accepted_schedules_pass_the_decrement_proxy(g1 in 2.5f64..10.0, rho in 0.35f64..0.9) {
        let r = validate_schedule(&Schedule::polynomial(g1, rho).unwrap(), 3.0).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Accept);
        let last = r.proxies.iter().find(|q| q.n == 1_000_000).unwrap();
        prop_assert!(last.decrement_ratio <= 0.1);
    }

    #[test]
    fn decrement_is_positive(g1 in 1e-3f64..10.0, rho in 0.05f64..1.5, n in 1u64..1_000_000_000) {
        prop_assert!(PolynomialSchedule::new(g1, rho).unwrap().decrement(n) > 0.0);
    }
}
