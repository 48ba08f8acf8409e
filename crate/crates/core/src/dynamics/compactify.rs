//! Poincaré compactification of the first quadrant.
//!
//! Two directional charts cover the points at infinity:
//!
//! * `U1` (`u` direction): `u = 1/z`, `v = w/z`; after multiplying time
//!   by `z²`,  `w' = w² + w³ - k w z² - F w z³`, `z' = z w² + F z³ - F z⁴`.
//! * `U2` (`v` direction): `u = w/z`, `v = 1/z`; after the same rescaling,
//!   `w' = -w - w² + F z³ + k w z²`, `z' = -w z + (F + k) z³`.
//!
//! The chart origins are the two points at infinity in the quadrant:
//! `(u = ∞, v = 0)` (nilpotent, repelling into the quadrant since
//! `z' > 0` there) and `(u = 0, v = ∞)` (eigenvalues `-1, 0`: a
//! semi-hyperbolic saddle whose centre manifold
//! `w = F z³ - F(3F + 2k) z⁵ + …` carries `z' ≈ (F + k) z³ > 0`, i.e. a
//! one-dimensional unstable manifold entering the plane).

use serde::Serialize;

use super::census::limit_cycle_census;
use crate::continuation::cycles::Section;
use crate::equilibria::{equilibrium_pair, stability_at, NONHYPERBOLIC_TOL};
use crate::error::Result;
use crate::integrate::{Dopri5, IntegratorSettings};
use crate::model::{Params, State};

/// Directional chart of the Poincaré sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    U1,
    U2,
}

/// Map a finite state into a chart (`u > 0` for `U1`, `v > 0` for `U2`).
pub fn to_chart(chart: Chart, x: State) -> [f64; 2] {
    match chart {
        Chart::U1 => [x.v / x.u, 1.0 / x.u],
        Chart::U2 => [x.u / x.v, 1.0 / x.v],
    }
}

/// Inverse of [`to_chart`].
pub fn from_chart(chart: Chart, c: [f64; 2]) -> State {
    let [w, z] = c;
    match chart {
        Chart::U1 => State::new(1.0 / z, w / z),
        Chart::U2 => State::new(w / z, 1.0 / z),
    }
}

/// Time-rescaled field in a chart.
pub fn chart_field(chart: Chart, a: Params, c: [f64; 2]) -> [f64; 2] {
    let [w, z] = c;
    let (k, f) = (a.k, a.f);
    match chart {
        Chart::U1 => [w * w + w * w * w - k * w * z * z - f * w * z * z * z, z * w * w + f * z * z * z - f * z * z * z * z],
        Chart::U2 => [-w - w * w + f * z * z * z + k * w * z * z, -w * z + (f + k) * z * z * z],
    }
}

/// Centre-manifold graph of the saddle at `(u = 0, v = ∞)` in chart `U2`.
pub fn centre_manifold(a: Params, z: f64) -> f64 {
    a.f * z.powi(3) - a.f * (3.0 * a.f + 2.0 * a.k) * z.powi(5)
}

/// Type of a point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InfinityKind {
    /// Eigenvalues `(-1, 0)`; one-dimensional unstable centre manifold.
    DegenerateSaddle,
    /// Zero linear part; the quadrant flow leaves every neighbourhood.
    NilpotentRepeller,
}

/// A fixed point of the compactified flow on the equator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfinityPoint {
    pub direction: &'static str,
    pub chart: Chart,
    /// Chart coordinates `(w, z)`.
    pub coords: [f64; 2],
    pub eigenvalues: [f64; 2],
    pub kind: InfinityKind,
    pub degenerate: bool,
}

/// Where a trajectory ends up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Limit {
    TrivialPoint,
    PMp,
    /// A stable cycle, by ray coordinate.
    Cycle(f64),
    Undetermined,
}

/// Compactified portrait data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactPortrait {
    pub params: Params,
    pub infinity: Vec<InfinityPoint>,
    /// Unstable manifold of the degenerate saddle, in plane coordinates
    /// (after leaving the chart).
    pub unstable_manifold: Vec<State>,
    /// Chart part of the same manifold, in `U2` coordinates.
    pub chart_segment: Vec<[f64; 2]>,
    pub manifold_limit: Limit,
}

/// Jacobian of the chart field.
pub fn chart_jacobian(chart: Chart, a: Params, c: [f64; 2]) -> [[f64; 2]; 2] {
    let [w, z] = c;
    let (k, f) = (a.k, a.f);
    match chart {
        Chart::U1 => [
            [2.0 * w + 3.0 * w * w - k * z * z - f * z * z * z, -2.0 * k * w * z - 3.0 * f * w * z * z],
            [2.0 * z * w, w * w + 3.0 * f * z * z - 4.0 * f * z * z * z],
        ],
        Chart::U2 => [[-1.0 - 2.0 * w + k * z * z, 3.0 * f * z * z + 2.0 * k * w * z], [-z, -w + 3.0 * (f + k) * z * z]],
    }
}

fn real_eigs(j: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let d = (0.25 * tr * tr - det).max(0.0).sqrt();
    [0.5 * tr - d, 0.5 * tr + d]
}

/// Points at infinity in the closed quadrant.
pub fn infinity_points(a: Params) -> Vec<InfinityPoint> {
    let mut out = Vec::new();
    for (chart, direction, kind) in [(Chart::U1, "u=inf,v=0", InfinityKind::NilpotentRepeller), (Chart::U2, "u=0,v=inf", InfinityKind::DegenerateSaddle)] {
        let c = [0.0, 0.0];
        let f = chart_field(chart, a, c);
        debug_assert!(f[0] == 0.0 && f[1] == 0.0);
        out.push(InfinityPoint { direction, chart, coords: c, eigenvalues: real_eigs(chart_jacobian(chart, a, c)), kind, degenerate: true });
    }
    out
}

/// Launch point on the centre manifold.
pub const MANIFOLD_OFFSET: f64 = 1e-6;
/// Chart coordinate to which the manifold is advanced along its graph.
pub const MANIFOLD_ADVANCE: f64 = 0.05;
/// Chart coordinate at which the trajectory is transferred to the plane.
pub const CHART_EXIT: f64 = 0.5;

/// Build the compactified portrait and follow the unstable manifold of the
/// degenerate saddle to its limit.
pub fn compactified_portrait(a: Params) -> Result<CompactPortrait> {
    // Along the centre manifold the chart time diverges as z → 0
    // (z' ≈ (F + k) z³), so the manifold is advanced along its graph from
    // the launch offset to MANIFOLD_ADVANCE before integrating.
    let z0 = MANIFOLD_OFFSET.max(MANIFOLD_ADVANCE);
    let mut chart_segment = vec![[centre_manifold(a, MANIFOLD_OFFSET), MANIFOLD_OFFSET]];
    let start = [centre_manifold(a, z0), z0];
    chart_segment.push(start);
    let settings = IntegratorSettings::with_tol(1e-10, 1e-13);
    let mut chart_solver = Dopri5::new(move |_, y: &[f64; 2]| chart_field(Chart::U2, a, *y), 0.0, start, 1.0, settings);
    let mut entry = start;
    while chart_solver.t() < 1e6 {
        let st = chart_solver.step()?;
        if let Some((_, y)) = st.locate(|_, y| y[1] - CHART_EXIT, 1) {
            entry = y;
            chart_segment.push(y);
            break;
        }
        chart_segment.push(st.y1);
    }
    let x0 = from_chart(Chart::U2, entry);
    let mut solver = Dopri5::new(crate::integrate::gs_rhs(a), 0.0, [x0.u, x0.v], 1.0, settings)
        .with_nonnegative(2)
        .with_step_limit(crate::integrate::gs_step_limit(a));
    let mut path = vec![x0];
    let t_end = 2.0e4;
    while solver.t() < t_end {
        let st = solver.step_until(t_end)?;
        path.push(State::from_array(st.y1));
    }
    let last = *path.last().unwrap();
    let manifold_limit = identify_limit(a, &path, last);
    Ok(CompactPortrait { params: a, infinity: infinity_points(a), unstable_manifold: path, chart_segment, manifold_limit })
}

fn identify_limit(a: Params, path: &[State], last: State) -> Limit {
    if last.dist(&State::new(1.0, 0.0)) < 1e-4 {
        return Limit::TrivialPoint;
    }
    if let Some((p, _)) = equilibrium_pair(a) {
        if last.dist(&p) < 1e-4 && stability_at(p, a, NONHYPERBOLIC_TOL).class.is_stable() {
            return Limit::PMp;
        }
        if let (Ok(sec), Ok(cycles)) = (Section::at(a), limit_cycle_census(a)) {
            // Last crossing of the ray in the section's sense.
            let tail = &path[path.len() / 2..];
            let mut last_s = None;
            for w in tail.windows(2) {
                let (g0, g1) = (sec.g(&w[0].to_array()), sec.g(&w[1].to_array()));
                if (g0 < 0.0) != (g1 < 0.0) && (g1 - g0) * sec.sense > 0.0 {
                    let th = g0 / (g0 - g1);
                    let x = [w[0].u + th * (w[1].u - w[0].u), w[0].v + th * (w[1].v - w[0].v)];
                    let s = sec.coord(&x);
                    if s > 0.0 {
                        last_s = Some(s);
                    }
                }
            }
            if let Some(s) = last_s {
                if let Some(c) = cycles.iter().filter(|c| c.is_stable()).find(|c| (c.amplitude - s).abs() < 1e-3) {
                    return Limit::Cycle(c.amplitude);
                }
            }
        }
    }
    Limit::Undetermined
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_fields_match_plane_field() {
        let a = Params { k: 0.04, f: 0.02 };
        let x = State::new(0.3, 0.7);
        let f = crate::model::vector_field(x, a);
        for chart in [Chart::U1, Chart::U2] {
            let c = to_chart(chart, x);
            let z = c[1];
            // Chain rule for the chart map, divided by the time rescaling z².
            let h = 1e-7;
            let xp = State::new(x.u + h * f[0], x.v + h * f[1]);
            let xm = State::new(x.u - h * f[0], x.v - h * f[1]);
            let (cp, cm) = (to_chart(chart, xp), to_chart(chart, xm));
            let g = chart_field(chart, a, c);
            for i in 0..2 {
                let d = (cp[i] - cm[i]) / (2.0 * h);
                assert!((d - g[i] / (z * z)).abs() < 1e-6, "{chart:?} {i}: {d} vs {}", g[i] / (z * z));
            }
        }
    }

    #[test]
    fn chart_jacobian_matches_differences() {
        let a = Params { k: 0.03, f: 0.02 };
        for chart in [Chart::U1, Chart::U2] {
            let c = [0.3, 0.4];
            let j = chart_jacobian(chart, a, c);
            let h = 1e-6;
            for col in 0..2 {
                let (mut p, mut m) = (c, c);
                p[col] += h;
                m[col] -= h;
                let (fp, fm) = (chart_field(chart, a, p), chart_field(chart, a, m));
                for r in 0..2 {
                    assert!(((fp[r] - fm[r]) / (2.0 * h) - j[r][col]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn centre_manifold_is_invariant_to_order_five() {
        let a = Params { k: 0.05, f: 0.03 };
        for z in [1e-2, 2e-2] {
            let w = centre_manifold(a, z);
            let fz = chart_field(Chart::U2, a, [w, z]);
            let dh = 3.0 * a.f * z * z - 5.0 * a.f * (3.0 * a.f + 2.0 * a.k) * z.powi(4);
            let defect = fz[0] - dh * fz[1];
            assert!(defect.abs() < 10.0 * z.powi(6), "z={z} defect={defect}");
        }
    }
}
