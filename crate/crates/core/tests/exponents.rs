use proptest::prelude::*;

use weighted_lane_emden::ckn::{check_balance, BalanceVerdict, CknTriple};
use weighted_lane_emden::closed_forms::SingularProfile;
use weighted_lane_emden::emden_fowler::fixed_points;
use weighted_lane_emden::params::{classify, derive, RegimeKind, Witness};
use weighted_lane_emden::ProblemParams;

/// Admissible weights: `N + b > 0` and `b > a - 2`.
fn admissible() -> impl Strategy<Value = (u32, f64, f64)> {
    (3u32..=9, -1.5f64..3.0, 0.05f64..6.0).prop_filter_map("N+b > 0", |(n, a, gap)| {
        let b = a - 2.0 + gap;
        (f64::from(n) + b > 0.05 && f64::from(n) - 2.0 + a > 0.05).then_some((n, a, b))
    })
}

proptest! {
    #[test]
    fn every_point_has_exactly_one_true_witness(n in 3u32..=9, a in -1.5f64..4.0, b in -10.0f64..8.0, p in 1.0f64..15.0) {
        let params = ProblemParams::new(n, a, b, p);
        prop_assume!(params.validate().is_ok());
        let regime = classify(&params).unwrap();
        prop_assert!(regime.witness.holds(&params));
        let inadmissible = matches!(regime.regime, RegimeKind::InadmissibleWeights);
        prop_assert_eq!(inadmissible, f64::from(n) + b <= 0.0 || b <= a - 2.0);
    }

    #[test]
    fn classification_flips_across_the_critical_exponent((n, a, b) in admissible()) {
        let pc = ProblemParams::new(n, a, b, 2.0).p_critical();
        let below = classify(&ProblemParams::new(n, a, b, pc - 1e-6)).unwrap();
        let above = classify(&ProblemParams::new(n, a, b, pc + 1e-6)).unwrap();
        prop_assert_eq!(below.witness, Witness::PBelowCritical);
        prop_assert_eq!(above.witness, Witness::PAboveCritical);
        prop_assert_eq!(classify(&ProblemParams::new(n, a, b, pc)).unwrap().regime, RegimeKind::Critical);
    }

    #[test]
    fn lambda1_sign_matches_the_critical_exponent((n, a, b) in admissible(), t in 0.01f64..0.99, above in any::<bool>()) {
        let base = ProblemParams::new(n, a, b, 2.0);
        let (ps, pc) = (base.p_serrin(), base.p_critical());
        let p = if above { pc + t * 5.0 } else { ps + t * (pc - ps) };
        let d = derive(&ProblemParams { p, ..base }).unwrap();
        prop_assert_eq!(d.lambda1 < 0.0, p < pc);
        prop_assert!(d.lambda2 > 0.0);
    }

    #[test]
    fn lambda2_vanishes_at_serrin((n, a, b) in admissible(), t in 0.01f64..0.99) {
        let base = ProblemParams::new(n, a, b, 2.0);
        let ps = base.p_serrin();
        let below = derive(&ProblemParams { p: 1.0 + t * (ps - 1.0), ..base }).unwrap();
        prop_assert!(below.lambda2 < 0.0);
        let at = derive(&ProblemParams { p: ps, ..base }).unwrap();
        prop_assert!(at.lambda2.abs() < 1e-9 * (1.0 + at.gamma * at.gamma));
    }

    #[test]
    fn balance_holds_exactly_at_criticality((n, a, b) in admissible(), shift in -2.0f64..2.0) {
        prop_assume!(shift.abs() > 1e-6);
        let pc = ProblemParams::new(n, a, b, 2.0).p_critical();
        let on = check_balance(&CknTriple::new(n, a, b, pc + 1.0)).unwrap();
        prop_assert_ne!(on.verdict, BalanceVerdict::BalanceViolated);
        prop_assume!(pc + 1.0 + shift >= 2.0);
        let off = check_balance(&CknTriple::new(n, a, b, pc + 1.0 + shift)).unwrap();
        prop_assert_eq!(off.verdict, BalanceVerdict::BalanceViolated);
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant((n, a, b) in admissible(), t in 0.01f64..6.0) {
        let base = ProblemParams::new(n, a, b, 2.0);
        let params = ProblemParams { p: base.p_serrin() + t, ..base };
        let d = derive(&params).unwrap();
        let rep = fixed_points(&params).unwrap();
        let [m1, m2] = rep.eigenvalues;
        let scale = 1.0 + d.lambda1.abs() + (params.p - 1.0) * d.lambda2;
        prop_assert!(((m1 + m2).re + d.lambda1).abs() <= 1e-10 * scale);
        prop_assert!(((m1 * m2).re - (params.p - 1.0) * d.lambda2).abs() <= 1e-10 * scale * scale);
        prop_assert!((m1 * m2).im.abs() <= 1e-10 * scale * scale);
        let amp = SingularProfile::new(&params).unwrap().amplitude;
        prop_assert!((amp - rep.w_star).abs() <= 1e-12 * rep.w_star);
    }
}
