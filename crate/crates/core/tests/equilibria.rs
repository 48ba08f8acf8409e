//! Equilibria and closed-form curves against direct evaluation of the field.

use gskit::equilibria::{
    classify, discriminants, equilibria, equilibria_exact, hopf_f, neutral_saddle_f, saddle_node_f, stability_at, EquilibriumClass, ExactNontrivial,
};
use gskit::model::{jacobian, q, ExactParams};
use gskit::{vector_field, Params, State};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Parameters strictly between the two saddle-node branches.
fn inside_fold() -> impl Strategy<Value = Params> {
    (1e-4f64..0.0624, 0.01f64..0.99).prop_map(|(k, t)| {
        let (up, lo) = saddle_node_f(k).unwrap();
        Params { k, f: lo + t * (up - lo) }
    })
}

proptest! {
    #[test]
    fn nontrivial_equilibria_satisfy_the_identities(a in inside_fold()) {
        let set = equilibria(a);
        let (p1, p2) = (set.p_mp().unwrap(), set.p_pm().unwrap());
        let g = a.gamma();
        for p in [p1, p2] {
            prop_assert!((p.u + g * p.v - 1.0).abs() < 1e-13);
            prop_assert!((p.u * p.v - (a.f + a.k)).abs() < 1e-13);
            let r = vector_field(p, a);
            prop_assert!(r[0].abs() < 1e-13 && r[1].abs() < 1e-13);
        }
        prop_assert!(p1.u < p2.u);
        prop_assert!(stability_at(p2, a, 0.0).class.is_saddle());
        prop_assert!(stability_at(p1, a, 0.0).det > 0.0);
    }

    #[test]
    fn no_nontrivial_equilibria_outside_the_fold(k in 1e-4f64..0.0624, t in 1.01f64..3.0) {
        let (up, _) = saddle_node_f(k).unwrap();
        let a = Params { k, f: up * t };
        prop_assert!(discriminants(a).delta < 0.0);
        prop_assert!(equilibria(a).p_mp().is_none());
    }

    #[test]
    fn jacobian_matches_central_differences(u in 0.0f64..1.5, v in 0.0f64..1.5, k in 1e-3f64..0.1, f in 1e-3f64..0.1) {
        let a = Params { k, f };
        let j = jacobian(State::new(u, v), a);
        let h = 1e-6;
        for col in 0..2 {
            let (mut xp, mut xm) = ([u, v], [u, v]);
            xp[col] += h;
            xm[col] -= h;
            let fp = vector_field(State::from_array(xp), a);
            let fm = vector_field(State::from_array(xm), a);
            for row in 0..2 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                prop_assert!((fd - j[row][col]).abs() < 1e-8, "J[{row}][{col}] = {} vs {fd}", j[row][col]);
            }
        }
    }

    #[test]
    fn trivial_point_is_a_stable_node(k in 1e-4f64..0.2, f in 1e-4f64..0.2) {
        let r = classify(State::new(1.0, 0.0), Params { k, f }).unwrap();
        // Eigenvalues -F and -(F+k) are real and negative.
        prop_assert_eq!(r.class, EquilibriumClass::StableNode);
        prop_assert!((r.trace + 2.0 * f + k).abs() < 1e-15);
        prop_assert!((r.det - f * (f + k)).abs() < 1e-15);
    }

    #[test]
    fn hopf_curve_has_zero_trace_and_positive_det(k in 1e-4f64..0.0624) {
        let a = Params { k, f: hopf_f(k).unwrap() };
        let p = equilibria(a).p_mp().unwrap();
        let r = stability_at(p, a, 0.0);
        prop_assert!(r.trace.abs() < 1e-12, "trace {}", r.trace);
        prop_assert!(r.det > 0.0);
    }

    #[test]
    fn neutral_saddle_curve_has_zero_trace_at_the_saddle(k in 1e-4f64..0.0624) {
        let a = Params { k, f: neutral_saddle_f(k).unwrap() };
        let r = stability_at(equilibria(a).p_pm().unwrap(), a, 0.0);
        prop_assert!(r.trace.abs() < 1e-12);
        prop_assert!(r.det < 0.0);
    }

    #[test]
    fn exact_and_float_equilibria_agree(n in 1i64..60, m in 1i64..60) {
        // Whenever the exact route resolves the pair (rational sqrt(Delta)),
        // the floating route must agree with it.
        let e = ExactParams::new(q(n, 1024), q(m, 1024)).unwrap();
        let a = e.to_f64();
        match equilibria_exact(&e) {
            ExactNontrivial::Pair { p_mp, .. } => {
                let p = equilibria(a).p_mp().unwrap();
                prop_assert!((p_mp[0].to_f64().unwrap() - p.u).abs() < 1e-14);
                prop_assert!((p_mp[1].to_f64().unwrap() - p.v).abs() < 1e-14);
            }
            ExactNontrivial::None => prop_assert!(discriminants(a).delta < 0.0),
            _ => {}
        }
    }
}

#[test]
fn fold_and_hopf_meet_at_bt() {
    let (up, lo) = saddle_node_f(1.0 / 16.0).unwrap();
    assert_eq!((up, lo), (1.0 / 16.0, 1.0 / 16.0));
    assert!((hopf_f(1.0 / 16.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
    assert!((neutral_saddle_f(1.0 / 16.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
}

#[test]
fn hopf_lies_between_the_fold_branches() {
    for i in 1..100 {
        let k = 0.0625 * i as f64 / 100.0;
        let (up, lo) = saddle_node_f(k).unwrap();
        let h = hopf_f(k).unwrap();
        assert!(lo < h && h < up, "k = {k}");
    }
}

#[test]
fn domain_errors() {
    assert!(saddle_node_f(0.07).is_err());
    assert!(hopf_f(0.0).is_err());
    assert!(Params::new(-1.0, 0.1).is_err());
}

#[test]
fn exact_pair_at_gh_matches_floating_route() {
    let e = ExactParams::new(q(9, 256), q(3, 256)).unwrap();
    let ExactNontrivial::Pair { p_mp, p_pm } = equilibria_exact(&e) else { panic!("expected a rational pair") };
    assert_eq!(p_mp, [q(1, 4), q(3, 16)]);
    assert_eq!(p_pm, [q(3, 4), q(1, 16)]);
    let set = equilibria(e.to_f64());
    assert!((set.p_mp().unwrap().u - 0.25).abs() < 1e-15);
    assert!((set.p_pm().unwrap().v - 1.0 / 16.0).abs() < 1e-15);
}
