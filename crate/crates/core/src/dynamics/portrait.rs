//! Deterministic phase-portrait rendering (SVG plus CSV trajectory dump).

use std::fmt::Write as _;

use serde::Serialize;

use super::census::limit_cycle_census;
use crate::continuation::cycles::{CycleRepr, Section};
use crate::continuation::homoclinic::{saddle_directions, LAUNCH_EPS};
use crate::equilibria::{equilibria, stability_at, EquilibriumClass, NONHYPERBOLIC_TOL};
use crate::integrate::{gs_rhs, Dopri5, IntegratorSettings};
use crate::model::{Params, State};

/// Rendering controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortraitSpec {
    pub width: u32,
    pub height: u32,
    /// Seeds per axis of the uniform starting grid.
    pub grid: usize,
    pub t_max: f64,
    pub u_max: f64,
    pub v_max: f64,
}

impl Default for PortraitSpec {
    fn default() -> Self {
        PortraitSpec { width: 1000, height: 1000, grid: 8, t_max: 1500.0, u_max: 1.0, v_max: 1.0 }
    }
}

/// A named polyline with its sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub kind: CurveKind,
    pub times: Vec<f64>,
    pub points: Vec<State>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Trajectory,
    StableCycle,
    UnstableCycle,
    Separatrix,
}

/// Rendered portrait.
#[derive(Debug, Clone, PartialEq)]
pub struct Portrait {
    pub svg: String,
    pub csv: String,
    pub curves: Vec<Curve>,
    pub cycles: Vec<CycleRepr>,
}

fn trace(a: Params, x0: State, t_end: f64, sign: f64, stop: impl Fn(&[f64; 2]) -> bool) -> (Vec<f64>, Vec<State>) {
    let settings = IntegratorSettings { max_step: 2.0, ..IntegratorSettings::with_tol(1e-8, 1e-11) };
    let rhs = gs_rhs(a);
    let mut rhs = rhs;
    let mut solver = Dopri5::new(move |t, y: &[f64; 2]| {
        let f = rhs(t, y);
        [sign * f[0], sign * f[1]]
    }, 0.0, x0.to_array(), 1.0, settings)
    .with_nonnegative(2)
    .with_step_limit(crate::integrate::gs_step_limit(a));
    let (mut ts, mut xs) = (vec![0.0], vec![x0]);
    while solver.t() < t_end {
        match solver.step_until(t_end) {
            Ok(st) => {
                ts.push(sign * st.t1);
                xs.push(State::from_array(st.y1));
                if stop(&st.y1) {
                    break;
                }
            }
            Err(_) => break,
        }
    }
    (ts, xs)
}

fn class_colour(c: &EquilibriumClass) -> &'static str {
    match c {
        EquilibriumClass::Saddle => "#d62728",
        EquilibriumClass::StableNode | EquilibriumClass::StableSpiral => "#2ca02c",
        EquilibriumClass::UnstableNode | EquilibriumClass::UnstableSpiral => "#1f77b4",
        EquilibriumClass::Nonhyperbolic(_) => "#ff7f0e",
    }
}

/// Render the portrait for parameters `a`.
pub fn render_portrait(a: Params, spec: &PortraitSpec) -> Portrait {
    let mut curves = Vec::new();
    let far = |y: &[f64; 2]| y[0] > 4.0 || y[1] > 4.0;
    // Seed grid.
    let n = spec.grid.max(1);
    for i in 0..n {
        for j in 0..n {
            let x0 = State::new(spec.u_max * (i as f64 + 0.5) / n as f64, spec.v_max * (j as f64 + 0.5) / n as f64);
            let (times, points) = trace(a, x0, spec.t_max, 1.0, far);
            curves.push(Curve { name: format!("traj{}", i * n + j), kind: CurveKind::Trajectory, times, points });
        }
    }
    // Cycles.
    let cycles = limit_cycle_census(a).unwrap_or_default();
    for (idx, c) in cycles.iter().enumerate() {
        let (times, points) = trace(a, c.section_point, c.period, 1.0, |_| false);
        let kind = if c.is_stable() { CurveKind::StableCycle } else { CurveKind::UnstableCycle };
        curves.push(Curve { name: format!("cycle{idx}"), kind, times, points });
    }
    // Separatrices of the saddle.
    let eq = equilibria(a);
    if let (Some(_), Some(saddle)) = (eq.p_mp(), eq.p_pm()) {
        if let Ok(sec) = Section::at(a) {
            if let Ok((eu, es)) = saddle_directions(&sec, a) {
                let offset = 1e3 * LAUNCH_EPS;
                for (label, e, sign) in [("sep_u+", eu, 1.0), ("sep_s+", es, -1.0)] {
                    for (suffix, o) in [("", 1.0), ("_opp", -1.0)] {
                        let x0 = State::new(saddle.u + o * offset * e[0], saddle.v + o * offset * e[1]);
                        let (times, points) = trace(a, x0, spec.t_max, sign, far);
                        curves.push(Curve { name: format!("{label}{suffix}"), kind: CurveKind::Separatrix, times, points });
                    }
                }
            }
        }
    }

    let (w, h) = (spec.width as f64, spec.height as f64);
    let m = 60.0;
    let px = |s: &State| (m + s.u / spec.u_max * (w - 2.0 * m), h - m - s.v / spec.v_max * (h - 2.0 * m));
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, spec.width, spec.height, spec.width, spec.height);
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##, spec.width, spec.height);
    let _ = writeln!(svg, r##"<rect x="{m:.2}" y="{m:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000"/>"##, w - 2.0 * m, h - 2.0 * m);
    let _ = writeln!(svg, r#"<text x="{m:.2}" y="40.00" font-family="sans-serif" font-size="20">k = {:.6}, F = {:.6}</text>"#, a.k, a.f);
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="16">u</text>"#, w / 2.0, h - 20.0);
    let _ = writeln!(svg, r#"<text x="20.00" y="{:.2}" font-family="sans-serif" font-size="16">v</text>"#, h / 2.0);
    let inside = |s: &State| s.u >= 0.0 && s.v >= 0.0 && s.u <= spec.u_max && s.v <= spec.v_max;
    for c in &curves {
        let (stroke, width, dash) = match c.kind {
            CurveKind::Trajectory => ("#888888", 1.0, ""),
            CurveKind::Separatrix => ("#d62728", 1.5, ""),
            CurveKind::StableCycle => ("#000000", 3.0, ""),
            CurveKind::UnstableCycle => ("#000000", 3.0, r#" stroke-dasharray="8,6""#),
        };
        let pts: Vec<&State> = c.points.iter().filter(|s| inside(s)).collect();
        if pts.len() < 2 {
            continue;
        }
        let mut d = String::new();
        for (i, s) in pts.iter().enumerate() {
            let (x, y) = px(s);
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, x, y);
        }
        let _ = writeln!(svg, r#"<path id="{}" d="{}" fill="none" stroke="{}" stroke-width="{:.1}"{}/>"#, c.name, d, stroke, width, dash);
        if matches!(c.kind, CurveKind::Trajectory | CurveKind::Separatrix) {
            // Arrowhead a quarter of the way along the visible samples.
            let i = pts.len() / 4;
            let (x0, y0) = px(pts[i]);
            let (x1, y1) = px(pts[(i + 1).min(pts.len() - 1)]);
            let (dx, dy) = (x1 - x0, y1 - y0);
            let len = dx.hypot(dy);
            if len > 0.0 {
                let (ux, uy) = (dx / len, dy / len);
                let s = 8.0;
                let tip = (x0 + ux * s, y0 + uy * s);
                let l = (x0 - uy * s * 0.5, y0 + ux * s * 0.5);
                let r = (x0 + uy * s * 0.5, y0 - ux * s * 0.5);
                let _ = writeln!(svg, r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{}"/>"#, tip.0, tip.1, l.0, l.1, r.0, r.1, stroke);
            }
        }
    }
    let mut eqs = vec![("p0", eq.p0)];
    if let Some(p) = eq.p_mp() {
        eqs.push(("p_mp", p));
    }
    if let Some(p) = eq.p_pm() {
        eqs.push(("p_pm", p));
    }
    if let crate::equilibria::Nontrivial::Degenerate { point } = eq.nontrivial {
        eqs.push(("p_deg", point));
    }
    for (name, p) in eqs {
        let class = stability_at(p, a, NONHYPERBOLIC_TOL).class;
        let (x, y) = px(&p);
        let _ = writeln!(svg, r##"<circle id="{name}" cx="{x:.2}" cy="{y:.2}" r="7.00" fill="{}" stroke="#000000"/>"##, class_colour(&class));
    }
    svg.push_str("</svg>\n");

    let mut csv = String::from("curve,t,u,v\n");
    for c in &curves {
        for (t, s) in c.times.iter().zip(&c.points) {
            let _ = writeln!(csv, "{},{:.9e},{:.12e},{:.12e}", c.name, t, s.u, s.v);
        }
    }
    Portrait { svg, csv, curves, cycles }
}
