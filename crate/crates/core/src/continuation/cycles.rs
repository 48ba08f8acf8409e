//! Poincaré section through `p_mp`, the return map and periodic-orbit shooting.
//!
//! The section is the ray `x = p_mp + s d`, `s > 0`, where `d` is
//! perpendicular to `Re q` (`q = (b, λ - a)` the leading eigenvector of
//! `Df(p_mp)`) and oriented away from the saddle `p_pm`. The section normal
//! is `n = Re q / |Re q|`; trajectories near `p_mp` cross the ray with the
//! sign of `n · A d`.

use serde::Serialize;

use crate::equilibria::equilibrium_pair;
use crate::error::{Error, Result};
use crate::integrate::{gs_step_limit, gs_variational, Dopri5, IntegratorSettings, Step};
use crate::model::{jacobian, vector_field, Params, State};

/// The section ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Section {
    pub origin: State,
    pub normal: [f64; 2],
    pub dir: [f64; 2],
    /// Sign of the crossing velocity `n · f` along the ray.
    pub sense: f64,
    /// The saddle `p_pm` (for escape tests).
    pub saddle: State,
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

impl Section {
    pub fn at(a: Params) -> Result<Section> {
        let (p, saddle) = equilibrium_pair(a).ok_or_else(|| Error::Domain("p_mp does not exist (Delta <= 0)".into()))?;
        let j = jacobian(p, a);
        let mu = 0.5 * (j[0][0] + j[1][1]);
        let re_q = [j[0][1], mu - j[0][0]];
        let norm = re_q[0].hypot(re_q[1]);
        if norm == 0.0 {
            return Err(Error::Domain("degenerate section normal".into()));
        }
        let normal = [re_q[0] / norm, re_q[1] / norm];
        let mut dir = [-normal[1], normal[0]];
        if dot(dir, [p.u - saddle.u, p.v - saddle.v]) < 0.0 {
            dir = [-dir[0], -dir[1]];
        }
        let ad = [j[0][0] * dir[0] + j[0][1] * dir[1], j[1][0] * dir[0] + j[1][1] * dir[1]];
        let sense = dot(normal, ad).signum();
        Ok(Section { origin: p, normal, dir, sense, saddle })
    }

    pub fn point(&self, s: f64) -> State {
        State::new(self.origin.u + s * self.dir[0], self.origin.v + s * self.dir[1])
    }

    /// Signed distance to the section line.
    pub fn g(&self, x: &[f64]) -> f64 {
        self.normal[0] * (x[0] - self.origin.u) + self.normal[1] * (x[1] - self.origin.v)
    }

    /// Ray coordinate of a point.
    pub fn coord(&self, x: &[f64]) -> f64 {
        self.dir[0] * (x[0] - self.origin.u) + self.dir[1] * (x[1] - self.origin.v)
    }

    /// Largest `s` keeping the ray inside the box `0 <= u <= 1`, `v >= 0`.
    pub fn box_limit(&self) -> f64 {
        let mut lim = f64::INFINITY;
        let (p, d) = (self.origin, self.dir);
        if d[0] < 0.0 {
            lim = lim.min(-p.u / d[0]);
        }
        if d[0] > 0.0 {
            lim = lim.min((1.0 - p.u) / d[0]);
        }
        if d[1] < 0.0 {
            lim = lim.min(-p.v / d[1]);
        }
        lim.min(2.0)
    }
}

/// A periodic orbit represented on the section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleRepr {
    pub section_point: State,
    pub period: f64,
    /// Nontrivial Floquet multiplier (determinant of the monodromy).
    pub nontrivial_multiplier: f64,
    pub section_normal: [f64; 2],
    /// Ray coordinate of the section point.
    pub amplitude: f64,
}

impl CycleRepr {
    pub fn is_stable(&self) -> bool {
        self.nontrivial_multiplier > 0.0 && self.nontrivial_multiplier < 1.0
    }
}

/// Controls for one evaluation of the return map.
#[derive(Debug, Clone, Copy)]
pub struct ReturnOptions {
    pub settings: IntegratorSettings,
    /// Integration time limit; raised to `RETURN_TIME_SCALE / F` when that
    /// is longer, since the slow time scale near `p_0` grows like `1/F`.
    pub t_max: f64,
}

/// Multiple of `1/F` always allowed for a return.
pub const RETURN_TIME_SCALE: f64 = 50.0;

impl ReturnOptions {
    /// Tight tolerances used for shooting and LPC continuation.
    pub fn precise() -> Self {
        ReturnOptions { settings: IntegratorSettings::with_tol(1e-12, 1e-14), t_max: 2.0e4 }
    }
    /// Looser tolerances used for scanning.
    pub fn scan() -> Self {
        ReturnOptions { settings: IntegratorSettings::with_tol(1e-10, 1e-13), t_max: 2.0e4 }
    }
}

/// Result of one return to the section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Return {
    pub s: f64,
    pub time: f64,
    pub point: State,
    /// `P'(s)` from the variational equation.
    pub derivative: f64,
    /// `det Φ(T)`.
    pub monodromy_det: f64,
}

/// Outcome of following a trajectory until it hits the positive ray in the
/// section's crossing sense.
fn first_return(a: Params, sec: &Section, start: State, sign: f64, opts: &ReturnOptions) -> Result<(f64, [f64; 6])> {
    let y0 = [start.u, start.v, 1.0, 0.0, 0.0, 1.0];
    let mut solver = Dopri5::new(gs_variational(a, sign), 0.0, y0, 1.0, opts.settings).with_nonnegative(2).with_step_limit(gs_step_limit(a));
    let escape = 0.5 * (1.0 - sec.saddle.u).hypot(sec.saddle.v);
    let sense = sec.sense * sign;
    let dir = if sense > 0.0 { 1 } else { -1 };
    let mut first = true;
    let t_max = opts.t_max.max(RETURN_TIME_SCALE / a.f);
    while solver.t() < t_max {
        let st: Step<6> = solver.step_until(t_max)?;
        if !first {
            if let Some((t, y)) = st.locate(|_, y| sec.g(y), dir) {
                if sec.coord(&y) > 0.0 {
                    return Ok((t, y));
                }
            }
        }
        first = false;
        let y = st.y1;
        if (y[0] - 1.0).hypot(y[1]) < escape || y[0].hypot(y[1]) > 50.0 {
            return Err(Error::NoReturn);
        }
        if (y[0] - sec.origin.u).hypot(y[1] - sec.origin.v) < 1e-13 {
            return Err(Error::NoReturn);
        }
    }
    Err(Error::NoReturn)
}

/// Evaluate the return map at ray coordinate `s` with its derivative.
pub fn return_map(a: Params, sec: &Section, s: f64, opts: &ReturnOptions) -> Result<Return> {
    let (t, y) = first_return(a, sec, sec.point(s), 1.0, opts)?;
    let phi = [[y[2], y[3]], [y[4], y[5]]];
    let d = sec.dir;
    let phid = [phi[0][0] * d[0] + phi[0][1] * d[1], phi[1][0] * d[0] + phi[1][1] * d[1]];
    let fx = vector_field(State::new(y[0], y[1]), a);
    let n = sec.normal;
    let nf = dot(n, fx);
    let derivative = dot(d, phid) - dot(d, fx) * dot(n, phid) / nf;
    Ok(Return {
        s: sec.coord(&y),
        time: t,
        point: State::new(y[0], y[1]),
        derivative,
        monodromy_det: phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0],
    })
}

/// Displacement `D(s) = P(s) - s`.
pub fn displacement(a: Params, sec: &Section, s: f64, opts: &ReturnOptions) -> Result<f64> {
    Ok(return_map(a, sec, s, opts)?.s - s)
}

/// Follow a trajectory from `start` (forward for `sign > 0`, backward
/// otherwise) to its first crossing of the positive ray; returns the ray
/// coordinate of the crossing.
pub fn ray_crossing(a: Params, sec: &Section, start: State, sign: f64, opts: &ReturnOptions) -> Result<f64> {
    let (_, y) = first_return(a, sec, start, sign, opts)?;
    Ok(sec.coord(&y))
}

/// Refine a periodic orbit by Newton iteration on `D(s) = 0`, using the
/// variational derivative; residual below `1e-10`.
pub fn shoot_cycle(a: Params, guess: CycleRepr) -> Result<CycleRepr> {
    let sec = Section::at(a)?;
    let s0 = sec.coord(&guess.section_point.to_array());
    shoot_on_section(a, &sec, s0, &ReturnOptions::precise())
}

/// Newton on the displacement along a given section, from coordinate `s0`.
pub fn shoot_on_section(a: Params, sec: &Section, s0: f64, opts: &ReturnOptions) -> Result<CycleRepr> {
    let mut s = s0;
    let mut r = return_map(a, sec, s, opts)?;
    for _ in 0..40 {
        let d = r.s - s;
        if d.abs() < 1e-11 {
            return Ok(CycleRepr {
                section_point: sec.point(s),
                period: r.time,
                nontrivial_multiplier: r.monodromy_det,
                section_normal: sec.normal,
                amplitude: s,
            });
        }
        let slope = r.derivative - 1.0;
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::NewtonDiverged);
        }
        let mut step = -d / slope;
        // Damped update: stay on the ray and on the defined part of the map.
        let mut accepted = false;
        for _ in 0..30 {
            let cand = s + step;
            if cand > 0.0 {
                if let Ok(rc) = return_map(a, sec, cand, opts) {
                    if (rc.s - cand).abs() < d.abs() || step.abs() < 1e-14 {
                        s = cand;
                        r = rc;
                        accepted = true;
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        if !accepted {
            return Err(Error::NewtonDiverged);
        }
    }
    Err(Error::NewtonDiverged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::hopf_f;

    #[test]
    fn section_geometry() {
        let a = Params { k: 0.05, f: hopf_f(0.05).unwrap() };
        let sec = Section::at(a).unwrap();
        assert!((dot(sec.normal, sec.dir)).abs() < 1e-15);
        let away = [sec.origin.u - sec.saddle.u, sec.origin.v - sec.saddle.v];
        assert!(dot(sec.dir, away) > 0.0);
        assert!((sec.coord(&sec.point(0.3).to_array()) - 0.3).abs() < 1e-15);
        assert!(sec.g(&sec.point(0.3).to_array()).abs() < 1e-15);
    }

    #[test]
    fn return_near_focus_matches_linear_rate() {
        // Near p_mp, P(s) ≈ s exp(2π μ/ω).
        let a = Params { k: 0.04, f: hopf_f(0.04).unwrap() + 2e-3 };
        let sec = Section::at(a).unwrap();
        let j = jacobian(sec.origin, a);
        let mu = 0.5 * (j[0][0] + j[1][1]);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let omega = (det - mu * mu).sqrt();
        let s = 1e-6;
        let r = return_map(a, &sec, s, &ReturnOptions::precise()).unwrap();
        let expect = (2.0 * std::f64::consts::PI * mu / omega).exp();
        assert!((r.s / s - expect).abs() < 1e-4, "{} vs {}", r.s / s, expect);
        assert!((r.derivative - expect).abs() < 1e-4);
    }
}
