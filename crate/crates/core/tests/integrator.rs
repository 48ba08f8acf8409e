//! Dormand–Prince integrator: order, invariance and long-time behaviour.

use gskit::equilibria::{equilibria, stability_at};
use gskit::integrate::{fixed_step_solution, integrate, self_convergence_orders, IntegratorSettings};
use gskit::{Params, State};
use proptest::prelude::*;

#[test]
fn fixed_step_self_convergence_is_fifth_order() {
    let orders = self_convergence_orders(Params { k: 0.04, f: 0.02 }, State::new(0.5, 0.3), 20.0, &[1.0, 0.5, 0.25, 0.125]).unwrap();
    for o in &orders {
        assert!(*o >= 4.5, "orders {orders:?}");
    }
}

#[test]
fn fixed_step_solution_converges_to_adaptive_reference() {
    let a = Params { k: 0.05, f: 0.03 };
    let x0 = State::new(0.6, 0.2);
    let reference = integrate(x0, a, 10.0, IntegratorSettings::with_tol(1e-13, 1e-15)).unwrap().last();
    let y = fixed_step_solution(a, x0, 10.0, 0.01).unwrap();
    assert!((y[0] - reference.u).abs() < 1e-10 && (y[1] - reference.v).abs() < 1e-10);
}

#[test]
fn trivial_point_attracts_outside_the_fold() {
    let tr = integrate(State::new(0.9, 0.1), Params { k: 0.07, f: 0.02 }, 2000.0, IntegratorSettings::default()).unwrap();
    let p = tr.last();
    assert!((p.u - 1.0).abs() < 1e-8 && p.v.abs() < 1e-8, "{p:?}");
}

#[test]
fn backward_integration_retraces_forward() {
    let a = Params { k: 0.05, f: 0.03 };
    let s = IntegratorSettings::with_tol(1e-12, 1e-14);
    let x0 = State::new(0.4, 0.3);
    let fwd = integrate(x0, a, 15.0, s).unwrap().last();
    let back = integrate(fwd, a, -15.0, s).unwrap().last();
    assert!(back.dist(&x0) < 1e-8, "{back:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn first_quadrant_is_forward_invariant(k in 1e-3f64..0.1, f in 1e-3f64..0.1, u in 0.0f64..2.0, v in 0.0f64..2.0) {
        let tr = integrate(State::new(u, v), Params { k, f }, 200.0, IntegratorSettings::with_tol(1e-8, 1e-10)).unwrap();
        for x in &tr.states {
            prop_assert!(x.u >= -1e-10 && x.v >= -1e-10, "{x:?}");
        }
        prop_assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn equilibria_stay_fixed(k in 1e-3f64..0.0624, t in 0.05f64..0.95) {
        let (up, lo) = gskit::equilibria::saddle_node_f(k).unwrap();
        let a = Params { k, f: lo + t * (up - lo) };
        let s = IntegratorSettings::default();
        let set = equilibria(a);
        for p in [Some(set.p0), set.p_mp(), set.p_pm()].into_iter().flatten() {
            // Rounding in the equilibrium itself grows like exp(lambda t)
            // along a repelling direction, so the horizon is capped at a few
            // e-folding times of the fastest growth rate.
            let growth = stability_at(p, a, 0.0).eigenvalues.as_complex().iter().map(|l| l.re).fold(0.0, f64::max);
            let horizon = if growth > 0.0 { (5.0 / growth).min(50.0) } else { 50.0 };
            let tr = integrate(p, a, horizon, s).unwrap();
            let drift = tr.states.iter().map(|x| x.dist(&p)).fold(0.0, f64::max);
            prop_assert!(drift <= s.abs_tol, "drift {drift}");
        }
    }
}
