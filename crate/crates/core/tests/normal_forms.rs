//! Normal-form coefficients checked against independent numerical oracles.

use gskit::bautin::{hopf_point, l1_clw, l1_kuz, l2_kuz, GH};
use gskit::bt::{bt_nondegeneracy_with, jordan_basis, projected_coefficients};
use gskit::continuation::cycles::{return_map, ReturnOptions, Section};
use gskit::model::{q, Kinetics};
use gskit::{vector_field, Params, State};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn to_f(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

/// Second directional derivative `B(x, y)` of the field by central
/// differences (polarization for `x != y`).
fn fd_bilinear(p: [f64; 2], a: Params, x: [f64; 2], y: [f64; 2]) -> [f64; 2] {
    let h = 1e-4;
    let f = |s: f64, t: f64| vector_field(State::new(p[0] + h * (s * x[0] + t * y[0]), p[1] + h * (s * x[1] + t * y[1])), a);
    let (pp, pm, mp, mm) = (f(1.0, 1.0), f(1.0, -1.0), f(-1.0, 1.0), f(-1.0, -1.0));
    [(pp[0] - pm[0] - mp[0] + mm[0]) / (4.0 * h * h), (pp[1] - pm[1] - mp[1] + mm[1]) / (4.0 * h * h)]
}

#[test]
fn bt_coefficients_match_finite_differences() {
    let b = jordan_basis();
    let (v0, v1, w0, w1) = (b.v0.clone().map(|x| to_f(&x)), b.v1.clone().map(|x| to_f(&x)), b.w0.clone().map(|x| to_f(&x)), b.w1.clone().map(|x| to_f(&x)));
    let a = Params { k: 1.0 / 16.0, f: 1.0 / 16.0 };
    let p = [0.5, 0.25];
    let b00 = fd_bilinear(p, a, v0, v0);
    let b01 = fd_bilinear(p, a, v0, v1);
    let dot = |x: [f64; 2], y: [f64; 2]| x[0] * y[0] + x[1] * y[1];
    let (a20, b20, b11) = (dot(b00, w0), dot(b00, w1), dot(b01, w1));
    let exact = projected_coefficients(&Kinetics::canonical(), &b, &[q(0, 1), q(0, 1)]).unwrap();
    assert!((a20 - to_f(&exact[0])).abs() < 1e-6, "a20 {a20} vs {}", exact[0]);
    assert!((b20 - to_f(&exact[1])).abs() < 1e-6, "b20 {b20} vs {}", exact[1]);
    assert!((b11 - to_f(&exact[2])).abs() < 1e-6, "b11 {b11} vs {}", exact[2]);
}

proptest! {
    #[test]
    fn bt_verdict_is_basis_independent(cn in prop_oneof![-9i64..-1, 1i64..9], cd in 1i64..9, tn in -9i64..9, td in 1i64..9) {
        let basis = jordan_basis().transformed(&q(cn, cd), &q(tn, td)).unwrap();
        let r = bt_nondegeneracy_with(&Kinetics::canonical(), &basis);
        let r0 = bt_nondegeneracy_with(&Kinetics::canonical(), &jordan_basis());
        prop_assert!(r.basis_checks.iter().all(|c| c.1));
        prop_assert_eq!(r.nondegenerate(), r0.nondegenerate());
        prop_assert_eq!(r.s, r0.s);
        prop_assert_eq!(&r.transversality_det, &r0.transversality_det);
    }
}

#[test]
fn mutated_model_fails_bt_verification() {
    assert!(bt_nondegeneracy_with(&Kinetics::canonical(), &jordan_basis()).nondegenerate());
    assert!(!bt_nondegeneracy_with(&Kinetics::mutated(), &jordan_basis()).nondegenerate());
}

/// Displacement of the return map at small amplitude on the Hopf curve:
/// with zero linear growth its sign is the sign of the first nonzero
/// Lyapunov coefficient.
fn hopf_displacement(a: Params, s: f64) -> f64 {
    let sec = Section::at(a).unwrap();
    return_map(a, &sec, s, &ReturnOptions::precise()).unwrap().s - s
}

#[test]
fn l1_sign_matches_return_map_oracle_on_fifty_points() {
    let mut checked = 0;
    for i in 0..50 {
        let k = 0.004 + (0.06 - 0.004) * i as f64 / 49.0;
        if (k - GH.k).abs() < 2e-3 {
            continue;
        }
        let a = hopf_point(k).unwrap();
        let l1 = l1_kuz(a).unwrap();
        let d = hopf_displacement(a, 2e-3);
        assert_eq!(l1 > 0.0, d > 0.0, "k = {k}: l1 = {l1}, displacement = {d}");
        assert_eq!(l1 > 0.0, l1_clw(a).unwrap() > 0.0, "k = {k}: bracket disagrees");
        checked += 1;
    }
    assert!(checked >= 45);
}

#[test]
fn l2_sign_matches_return_map_oracle_at_gh() {
    let a = hopf_point(GH.k).unwrap();
    assert!(l2_kuz(a).unwrap() > 0.0);
    for s in [5e-3, 1e-2, 2e-2] {
        let d = hopf_displacement(a, s);
        assert!(d > 0.0, "s = {s}: displacement {d}");
    }
}
