//! Limit-cycle census on the section ray.
//!
//! The displacement `D(s) = P(s) - s` is sampled on `(0, s_edge)`, where
//! `s_edge` is the crossing of the stable separatrix of `p_pm` (the edge of
//! the region swept by returning orbits) or, failing that, the exit of the
//! ray from the box `0 <= u <= 1, v >= 0`. Just inside the stable
//! separatrix, orbits return along the unstable separatrix, so the
//! splitting `s_U - s_S` supplies a final sample at `s_edge`. Sign changes
//! (and same-sign dips that reach zero) are refined to cycles.

use serde::Serialize;

use crate::continuation::cycles::{return_map, shoot_on_section, CycleRepr, ReturnOptions, Section};
use crate::continuation::homoclinic::{saddle_directions, LAUNCH_EPS};
use crate::continuation::cycles::ray_crossing;
use crate::equilibria::equilibrium_pair;
use crate::error::Result;
use crate::model::{Params, State};

/// Number of displacement samples.
pub const CENSUS_SAMPLES: usize = 400;

/// Full census output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub cycles: Vec<CycleRepr>,
    /// Upper end of the scanned ray.
    pub s_edge: f64,
    /// Stable separatrix crossing, when found.
    pub s_stable: Option<f64>,
    /// Unstable separatrix crossing, when found.
    pub s_unstable: Option<f64>,
}

impl Census {
    pub fn gap(&self) -> Option<f64> {
        Some(self.s_unstable? - self.s_stable?)
    }
}

/// Cycles surrounding `p_mp`, sorted by amplitude (innermost first).
pub fn limit_cycle_census(a: Params) -> Result<Vec<CycleRepr>> {
    Ok(census_report(a)?.cycles)
}

fn separatrix(sec: &Section, a: Params, stable: bool) -> Option<f64> {
    let (eu, es) = saddle_directions(sec, a).ok()?;
    let e = if stable { es } else { eu };
    let p = sec.saddle;
    let start = State::new(p.u + LAUNCH_EPS * e[0], p.v + LAUNCH_EPS * e[1]);
    ray_crossing(a, sec, start, if stable { -1.0 } else { 1.0 }, &ReturnOptions::precise()).ok()
}

/// Census with the scan geometry.
pub fn census_report(a: Params) -> Result<Census> {
    if equilibrium_pair(a).is_none() {
        return Ok(Census { cycles: Vec::new(), s_edge: 0.0, s_stable: None, s_unstable: None });
    }
    let sec = Section::at(a)?;
    let s_stable = separatrix(&sec, a, true).filter(|s| *s > 0.0);
    let s_unstable = if s_stable.is_some() { separatrix(&sec, a, false) } else { None };
    let s_edge = s_stable.unwrap_or_else(|| sec.box_limit());
    let scan = ReturnOptions::scan();
    let disp = |s: f64| return_map(a, &sec, s, &scan).ok().map(|r| r.s - s);

    let n = CENSUS_SAMPLES;
    let mut samples: Vec<(f64, Option<f64>)> = (1..n).map(|i| s_edge * i as f64 / n as f64).map(|s| (s, disp(s))).collect();
    match (s_stable, s_unstable) {
        (Some(ss), Some(su)) => samples.push((ss, Some(su - ss))),
        _ => samples.push((s_edge, None)),
    }

    let mut brackets: Vec<(f64, f64, f64, f64)> = Vec::new();
    for w in samples.windows(2) {
        if let ((s0, Some(d0)), (s1, Some(d1))) = (w[0], w[1]) {
            if (d0 > 0.0) != (d1 > 0.0) {
                brackets.push((s0, s1, d0, d1));
            }
        }
    }
    // Same-sign dips: a pair of nearby roots can hide between samples.
    let mut dips = 0;
    for w in samples.windows(3) {
        if let ((s0, Some(d0)), (_, Some(d1)), (s2, Some(d2))) = (w[0], w[1], w[2]) {
            let same = (d0 > 0.0) == (d1 > 0.0) && (d1 > 0.0) == (d2 > 0.0);
            if same && d1.abs() < d0.abs() && d1.abs() < d2.abs() && dips < 16 {
                dips += 1;
                let sgn = d1.signum();
                if let Some((sm, dm)) = golden_min(|s| disp(s).map(|d| sgn * d), s0, s2) {
                    if dm < 0.0 {
                        let dm = sgn * dm;
                        brackets.push((s0, sm, d0, dm));
                        brackets.push((sm, s2, dm, d2));
                    }
                }
            }
        }
    }

    let precise = ReturnOptions::precise();
    let mut cycles: Vec<CycleRepr> = Vec::new();
    for (mut lo, mut hi, mut dlo, _) in brackets {
        let width = 1e-7 * s_edge;
        while hi - lo > width {
            let mid = 0.5 * (lo + hi);
            match return_map(a, &sec, mid, &precise) {
                Ok(r) => {
                    let dm = r.s - mid;
                    if (dm > 0.0) == (dlo > 0.0) {
                        lo = mid;
                        dlo = dm;
                    } else {
                        hi = mid;
                    }
                }
                Err(_) => break,
            }
        }
        let mid = 0.5 * (lo + hi);
        let cyc = match shoot_on_section(a, &sec, mid, &precise) {
            Ok(c) if c.amplitude >= lo - width && c.amplitude <= hi + width => Some(c),
            _ => return_map(a, &sec, mid, &precise).ok().map(|r| CycleRepr {
                section_point: sec.point(mid),
                period: r.time,
                nontrivial_multiplier: r.monodromy_det,
                section_normal: sec.normal,
                amplitude: mid,
            }),
        };
        if let Some(c) = cyc {
            if !cycles.iter().any(|o| (o.amplitude - c.amplitude).abs() < 1e-7) {
                cycles.push(c);
            }
        }
    }
    cycles.sort_by(|x, y| x.amplitude.partial_cmp(&y.amplitude).unwrap());
    Ok(Census { cycles, s_edge, s_stable, s_unstable })
}

/// Golden-section minimum of `g` on `[a, b]`.
fn golden_min(g: impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64) -> Option<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    for _ in 0..40 {
        if gc.min(gd) < 0.0 {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d)?;
        }
    }
    Some(if gc < gd { (c, gc) } else { (d, gd) })
}
