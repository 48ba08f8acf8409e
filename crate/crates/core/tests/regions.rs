//! Region labels, the region map, the compactification at infinity and
//! portrait rendering.

use gskit::continuation::lpc::{lpc_from_pair, wedge_point};
use gskit::dynamics::compactify::{chart_field, compactified_portrait, from_chart, infinity_points, to_chart, Chart, InfinityKind, Limit};
use gskit::dynamics::map::{expected_adjacency, region_map, MapSpec};
use gskit::dynamics::portrait::{render_portrait, PortraitSpec};
use gskit::dynamics::regions::{classify_region, expected_splitting_sign, region_from_signature, RegionId, Signature};
use gskit::equilibria::{hopf_f, saddle_node_f};
use gskit::model::{vector_field, Params, State};
use proptest::prelude::*;

fn sig(cycles: &[bool]) -> Signature {
    Signature { equilibria: 3, p_mp: None, cycles_stable: cycles.to_vec(), splitting_sign: None }
}

#[test]
fn signature_table_lookup() {
    assert_eq!(region_from_signature(&sig(&[]), Some(true)), RegionId::R1);
    assert_eq!(region_from_signature(&sig(&[false]), Some(true)), RegionId::R2);
    assert_eq!(region_from_signature(&sig(&[true, false]), Some(false)), RegionId::R3);
    assert_eq!(region_from_signature(&sig(&[true]), Some(false)), RegionId::R4);
    assert_eq!(region_from_signature(&sig(&[]), Some(false)), RegionId::R5);
    assert_eq!(region_from_signature(&sig(&[true]), Some(true)), RegionId::Unclassified);
    assert_eq!(region_from_signature(&sig(&[]), None), RegionId::Unclassified);
    let one = Signature { equilibria: 1, ..sig(&[]) };
    assert_eq!(region_from_signature(&one, None), RegionId::Outside);
}

#[test]
fn outside_the_fold_is_outside() {
    let (upper, lower) = saddle_node_f(0.02).unwrap();
    for f in [upper + 1e-3, 0.5 * lower] {
        let label = classify_region(Params { k: 0.02, f });
        assert_eq!(label.id, RegionId::Outside, "F = {f}");
        assert_eq!(label.signature.equilibria, 1);
    }
}

#[test]
fn two_cycle_wedge_is_region_3_and_locally_constant() {
    let k = 0.032;
    let fh = hopf_f(k).unwrap();
    let ft = lpc_from_pair(wedge_point(k).unwrap()).unwrap().params.f;
    assert!(ft < fh);
    let mid = 0.5 * (fh + ft);
    let w = fh - ft;
    for f in [mid - 0.2 * w, mid, mid + 0.2 * w] {
        let label = classify_region(Params { k, f });
        assert_eq!(label.id, RegionId::R3, "F = {f}: {:?}", label.signature);
        assert!(label.tags.is_empty());
        assert_eq!(label.signature.splitting_sign, expected_splitting_sign(RegionId::R3));
    }
}

#[test]
fn labels_agree_with_splitting_sign() {
    let k = 0.05;
    let fh = hopf_f(k).unwrap();
    let (_, lower) = saddle_node_f(k).unwrap();
    for f in [lower + 0.25 * (fh - lower), lower + 0.75 * (fh - lower), fh + 2e-3, fh + 1e-2] {
        let label = classify_region(Params { k, f });
        assert_ne!(label.id, RegionId::Unclassified, "F = {f}: {:?}", label.signature);
        if let (Some(s), Some(e)) = (label.signature.splitting_sign, expected_splitting_sign(label.id)) {
            assert_eq!(s, e, "F = {f}: {:?}", label);
        }
    }
}

#[test]
fn coarse_map_adjacency_is_a_subset_of_the_expected_graph() {
    let spec = MapSpec { k_range: (0.0, 0.07), f_range: (0.0, 0.07), nk: 24, nf: 24 };
    let map = region_map(&spec);
    let expected = expected_adjacency();
    let seen = map.adjacency();
    assert!(seen.is_subset(&expected), "unexpected adjacencies: {:?}", seen.difference(&expected).collect::<Vec<_>>());
    assert!(!map.regions().contains(&RegionId::Unclassified));
    for id in [RegionId::Outside, RegionId::R1, RegionId::R5] {
        assert!(map.regions().contains(&id), "{id} missing");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn chart_roundtrip_is_identity(u in 1e-3f64..50.0, v in 1e-3f64..50.0) {
        let x = State::new(u, v);
        for chart in [Chart::U1, Chart::U2] {
            let y = from_chart(chart, to_chart(chart, x));
            prop_assert!((y.u - u).abs() <= 1e-12 * u.max(1.0));
            prop_assert!((y.v - v).abs() <= 1e-12 * v.max(1.0));
        }
    }

    #[test]
    fn chart_field_is_the_rescaled_kinetics(u in 0.1f64..20.0, v in 0.1f64..20.0, k in 0.001f64..0.07, f in 0.001f64..0.07) {
        // In U2, w = u / v, z = 1 / v and time is rescaled by z² = 1 / v².
        let a = Params { k, f };
        let x = State::new(u, v);
        let g = vector_field(x, a);
        let w = u / v;
        let z = 1.0 / v;
        let expect = [(g[0] / v - u * g[1] / (v * v)) * z * z, -g[1] / (v * v) * z * z];
        let got = chart_field(Chart::U2, a, [w, z]);
        for i in 0..2 {
            prop_assert!((got[i] - expect[i]).abs() <= 1e-10 * expect[i].abs().max(1e-6), "{got:?} vs {expect:?}");
        }
    }
}

#[test]
fn both_points_at_infinity_are_found() {
    let pts = infinity_points(Params { k: 0.05, f: 0.03 });
    assert_eq!(pts.len(), 2);
    let saddle = pts.iter().find(|p| p.kind == InfinityKind::DegenerateSaddle).unwrap();
    assert_eq!(saddle.chart, Chart::U2);
    assert_eq!(saddle.eigenvalues, [-1.0, 0.0]);
    let rep = pts.iter().find(|p| p.kind == InfinityKind::NilpotentRepeller).unwrap();
    assert_eq!(rep.eigenvalues, [0.0, 0.0]);
    assert!(pts.iter().all(|p| p.degenerate));
}

#[test]
fn unstable_manifold_from_infinity_reaches_a_finite_attractor() {
    let beyond = Params { k: 0.02, f: saddle_node_f(0.02).unwrap().0 + 0.02 };
    for a in [Params { k: 0.05, f: 0.03 }, beyond] {
        let cp = compactified_portrait(a).unwrap();
        assert_ne!(cp.manifold_limit, Limit::Undetermined, "{a:?}");
        assert!(cp.unstable_manifold.iter().all(|x| x.u.is_finite() && x.v.is_finite() && x.u >= -1e-10 && x.v >= -1e-10));
    }
    let outside = compactified_portrait(beyond).unwrap();
    assert_eq!(outside.manifold_limit, Limit::TrivialPoint);
}

#[test]
fn portrait_rendering_is_deterministic() {
    let a = Params { k: 0.05, f: hopf_f(0.05).unwrap() - 1e-3 };
    let spec = PortraitSpec { width: 400, height: 400, grid: 3, t_max: 300.0, ..PortraitSpec::default() };
    let p1 = render_portrait(a, &spec);
    let p2 = render_portrait(a, &spec);
    assert_eq!(p1.svg.as_bytes(), p2.svg.as_bytes());
    assert_eq!(p1.csv.as_bytes(), p2.csv.as_bytes());
    assert!(p1.svg.starts_with("<svg") || p1.svg.starts_with("<?xml"));
    assert!(!p1.curves.is_empty());
}
