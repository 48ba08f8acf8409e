//! Limit cycles: return map, Floquet multipliers, census and splitting.

use gskit::bautin::hopf_offset_f;
use gskit::continuation::cycles::{return_map, ReturnOptions, Section};
use gskit::continuation::homoclinic::{locate_homoclinic, separatrix_splitting, splitting_report, LAUNCH_EPS};
use gskit::continuation::lpc::{lpc_from_pair, wedge_point};
use gskit::continuation::shoot_cycle;
use gskit::dynamics::limit_cycle_census;
use gskit::equilibria::{hopf_f, saddle_node_f};
use gskit::Params;

#[test]
fn return_map_derivative_matches_finite_differences() {
    let a = Params { k: 0.02, f: hopf_f(0.02).unwrap() - 1e-4 };
    let sec = Section::at(a).unwrap();
    let opts = ReturnOptions::precise();
    for s in [2e-3, 5e-3, 1e-2] {
        let r = return_map(a, &sec, s, &opts).unwrap();
        let h = 1e-6;
        let fd = (return_map(a, &sec, s + h, &opts).unwrap().s - return_map(a, &sec, s - h, &opts).unwrap().s) / (2.0 * h);
        assert!((r.derivative - fd).abs() < 1e-5, "s = {s}: {} vs {fd}", r.derivative);
    }
}

#[test]
fn floquet_multiplier_equals_return_map_slope_on_a_cycle() {
    let a = Params { k: 0.02, f: hopf_f(0.02).unwrap() - 1e-4 };
    let cycles = limit_cycle_census(a).unwrap();
    assert_eq!(cycles.len(), 1);
    let c = cycles[0];
    let sec = Section::at(a).unwrap();
    let r = return_map(a, &sec, c.amplitude, &ReturnOptions::precise()).unwrap();
    assert!((r.s - c.amplitude).abs() < 1e-10);
    assert!((r.derivative - c.nontrivial_multiplier).abs() < 1e-6, "{} vs {}", r.derivative, c.nontrivial_multiplier);
    let again = shoot_cycle(a, c).unwrap();
    assert!((again.amplitude - c.amplitude).abs() < 1e-9);
}

#[test]
fn supercritical_cycle_below_hopf_is_stable_and_attracts() {
    let a = Params { k: 0.02, f: hopf_f(0.02).unwrap() - 5e-5 };
    let cycles = limit_cycle_census(a).unwrap();
    assert_eq!(cycles.len(), 1);
    let c = cycles[0];
    assert!(c.is_stable() && c.nontrivial_multiplier > 0.0);
    // Iterates of the return map converge monotonically from either side;
    // close to the cycle the error contracts by the multiplier.
    let sec = Section::at(a).unwrap();
    let opts = ReturnOptions::precise();
    for s0 in [0.5 * c.amplitude, 1.2 * c.amplitude] {
        let mut s = s0;
        for _ in 0..20 {
            let next = return_map(a, &sec, s, &opts).unwrap().s;
            assert!((next - c.amplitude).abs() < (s - c.amplitude).abs());
            assert_eq!(next > c.amplitude, s > c.amplitude);
            s = next;
        }
    }
    for d in [-1e-5, 1e-5] {
        let s0 = c.amplitude + d;
        let ratio = (return_map(a, &sec, s0, &opts).unwrap().s - c.amplitude) / d;
        assert!((ratio - c.nontrivial_multiplier).abs() < 1e-3, "error ratio {ratio} vs multiplier {}", c.nontrivial_multiplier);
    }
}

#[test]
fn cycle_amplitude_grows_like_square_root_of_hopf_distance() {
    let k = 0.02;
    let nus = [-1e-8, -4e-8, -1.6e-7];
    let amps: Vec<f64> = nus
        .iter()
        .map(|&nu| {
            let a = Params { k, f: hopf_offset_f(k, nu).unwrap() };
            limit_cycle_census(a).unwrap()[0].amplitude
        })
        .collect();
    let xs: Vec<f64> = nus.iter().map(|n| n.abs().ln()).collect();
    let ys: Vec<f64> = amps.iter().map(|a| a.ln()).collect();
    let slope = gskit::continuation::homoclinic::slope(&xs, &ys);
    assert!((slope - 0.5).abs() <= 0.05, "exponent {slope}, amplitudes {amps:?}");
}

#[test]
fn splitting_changes_sign_across_the_homoclinic_curve() {
    let k = 0.057;
    let p = locate_homoclinic(k, None).unwrap();
    assert!(p.bracket() <= 1e-8);
    let below = separatrix_splitting(Params { k, f: p.f - 1e-5 }).unwrap();
    let above = separatrix_splitting(Params { k, f: p.f + 1e-5 }).unwrap();
    assert!(below * above < 0.0, "{below} vs {above}");
    assert!(p.gap_lo * p.gap_hi <= 0.0);
    let (_, lo) = saddle_node_f(k).unwrap();
    assert!(p.f > lo);
    // The gap shrinks monotonically towards the located point.
    let gaps: Vec<f64> = [1e-4, 1e-5, 1e-6].iter().map(|d| separatrix_splitting(Params { k, f: p.f + d }).unwrap().abs()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}

#[test]
fn splitting_is_insensitive_to_launch_distance() {
    let r = splitting_report(Params { k: 0.06, f: 0.046 }, LAUNCH_EPS).unwrap();
    assert!(r.richardson_ok(), "{r:?}");
}

#[test]
fn census_count_changes_at_the_lpc_with_unit_multiplier() {
    let t = lpc_from_pair(wedge_point(0.032).unwrap()).unwrap();
    assert!((t.cycle.nontrivial_multiplier - 1.0).abs() < 1e-6, "multiplier {}", t.cycle.nontrivial_multiplier);
    let inside = limit_cycle_census(Params { k: 0.032, f: t.params.f + 1e-7 }).unwrap();
    let outside = limit_cycle_census(Params { k: 0.032, f: t.params.f - 1e-7 }).unwrap();
    assert_eq!((inside.len(), outside.len()), (2, 0));
    let (s1, s2) = (inside[0].nontrivial_multiplier, inside[1].nontrivial_multiplier);
    assert!(s1 < 1.0 && s2 > 1.0);
}

#[test]
fn subcritical_cycle_lies_on_the_stable_side_of_the_hopf_curve() {
    // With ℓ1 > 0 the small cycle is unstable and surrounds a stable focus,
    // so it exists above the Hopf curve and not below it.
    let k = 0.05;
    let fh = hopf_f(k).unwrap();
    let above = limit_cycle_census(Params { k, f: fh + 1e-4 }).unwrap();
    assert_eq!(above.len(), 1, "{above:?}");
    assert!(above[0].nontrivial_multiplier > 1.0);
    let below = limit_cycle_census(Params { k, f: fh - 1e-4 }).unwrap();
    assert!(below.is_empty(), "{below:?}");
}
