//! Dormand–Prince 5(4) integration with 4th-order dense output.
//!
//! The stepper is generic over the state dimension so the same code carries
//! plain trajectories (`N = 2`) and trajectories with their variational
//! equations (`N = 6`). Each accepted step exposes a continuous extension
//! used for event location on Poincaré sections.

use crate::error::{Error, Result};
use crate::model::{jacobian, vector_field, Params, State};
use serde::Serialize;

/// Tolerances and step limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        IntegratorSettings { rel_tol: 1e-10, abs_tol: 1e-12, max_step: f64::INFINITY, min_step: 1e-14, max_steps: 2_000_000 }
    }
}

impl IntegratorSettings {
    pub fn with_tol(rel_tol: f64, abs_tol: f64) -> Self {
        IntegratorSettings { rel_tol, abs_tol, ..Default::default() }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    rc: [[f64; N]; 3],
}

impl<const N: usize> Step<N> {
    /// Dense output at `t` (4th order inside the step).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let th = (t - self.t0) / h;
        let th1 = 1.0 - th;
        std::array::from_fn(|i| {
            let rc2 = self.y1[i] - self.y0[i];
            self.y0[i] + th * (rc2 + th1 * (self.rc[0][i] + th * (self.rc[1][i] + th1 * self.rc[2][i])))
        })
    }

    /// First root in the step of `g(t, y(t))` with the sign change going from
    /// `sign(g0)` to `-sign(g0)`, by bracketed Illinois iteration on the dense
    /// output. `direction` restricts to upward (`> 0`) or downward (`< 0`)
    /// crossings; `0` accepts both.
    pub fn locate(&self, g: impl Fn(f64, &[f64; N]) -> f64, direction: i32) -> Option<(f64, [f64; N])> {
        let (g0, g1) = (g(self.t0, &self.y0), g(self.t1, &self.y1));
        let up = g0 < 0.0 && g1 >= 0.0;
        let down = g0 > 0.0 && g1 <= 0.0;
        if !((up && direction >= 0) || (down && direction <= 0)) {
            return None;
        }
        let (mut a, mut b, mut ga, mut gb) = (self.t0, self.t1, g0, g1);
        let mut side = 0;
        for _ in 0..200 {
            let t = (a * gb - b * ga) / (gb - ga);
            let gt = g(t, &self.eval(t));
            if gt == 0.0 || (b - a).abs() <= 1e-15 * (1.0 + t.abs()) {
                return Some((t, self.eval(t)));
            }
            if (gt > 0.0) == (ga > 0.0) {
                a = t;
                ga = gt;
                if side == -1 {
                    gb *= 0.5;
                }
                side = -1;
            } else {
                b = t;
                gb = gt;
                if side == 1 {
                    ga *= 0.5;
                }
                side = 1;
            }
        }
        let t = 0.5 * (a + b);
        Some((t, self.eval(t)))
    }
}

/// Adaptive (or fixed-step) Dormand–Prince stepper.
pub struct Dopri5<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]> {
    f: F,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    fixed: bool,
    settings: IntegratorSettings,
    steps: usize,
    /// Number of leading components constrained to stay `>= -abs_tol`.
    nonnegative: usize,
    /// State-dependent cap on the step length.
    step_limit: Option<Box<dyn Fn(&[f64; N]) -> f64>>,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

impl<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]> Dopri5<N, F> {
    /// Adaptive stepper integrating forward (`direction > 0`) or backward.
    pub fn new(mut f: F, t0: f64, y0: [f64; N], direction: f64, settings: IntegratorSettings) -> Self {
        let k1 = f(t0, &y0);
        let mut s = Dopri5 { f, t: t0, y: y0, k1, h: 0.0, fixed: false, settings, steps: 0, nonnegative: 0, step_limit: None };
        s.h = s.initial_step() * direction.signum();
        s
    }

    /// Fixed-step stepper (no error control), for convergence studies.
    pub fn fixed(mut f: F, t0: f64, y0: [f64; N], h: f64) -> Self {
        let k1 = f(t0, &y0);
        Dopri5 { f, t: t0, y: y0, k1, h, fixed: true, settings: IntegratorSettings::default(), steps: 0, nonnegative: 0, step_limit: None }
    }

    /// Reject steps that push the first `n` components below `-abs_tol`.
    pub fn with_nonnegative(mut self, n: usize) -> Self {
        self.nonnegative = n;
        self
    }

    /// Cap every step at `limit(y)` evaluated at the step's initial state.
    /// Error control alone lets the step grow without bound once the local
    /// error falls to rounding level near an attracting equilibrium, until
    /// `h λ` leaves the method's stability interval and rounding errors are
    /// amplified.
    pub fn with_step_limit(mut self, limit: impl Fn(&[f64; N]) -> f64 + 'static) -> Self {
        self.step_limit = Some(Box::new(limit));
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.settings.abs_tol + self.settings.rel_tol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self) -> f64 {
        let n = N as f64;
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = self.scale(self.y[i], self.y[i]);
            d0 += (self.y[i] / sc).powi(2);
            d1 += (self.k1[i] / sc).powi(2);
        }
        let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = axpy(&self.y, h0, &[(1.0, &self.k1)]);
        let f1 = (self.f)(self.t + h0, &y1);
        let mut d2 = 0.0;
        for i in 0..N {
            d2 += ((f1[i] - self.k1[i]) / self.scale(self.y[i], self.y[i])).powi(2);
        }
        let d2 = (d2 / n).sqrt() / h0;
        let m = d1.max(d2);
        let h1 = if m <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / m).powf(0.2) };
        (100.0 * h0).min(h1).min(self.settings.max_step)
    }

    /// Take one accepted step, never stepping past `t_limit` (in the
    /// direction of integration).
    pub fn step_until(&mut self, t_limit: f64) -> Result<Step<N>> {
        let dir = self.h.signum();
        loop {
            if self.steps >= self.settings.max_steps {
                return Err(Error::TooManySteps(self.settings.max_steps));
            }
            let mut h = self.h;
            if h.abs() > self.settings.max_step {
                h = self.settings.max_step * dir;
            }
            if let Some(limit) = &self.step_limit {
                let cap = limit(&self.y);
                if h.abs() > cap {
                    h = cap * dir;
                }
            }
            let remaining = t_limit - self.t;
            let last = remaining * dir <= h.abs() * (1.0 + 1e-12);
            if last {
                h = remaining;
            }
            if h == 0.0 {
                return Err(Error::StepUnderflow { t: self.t });
            }
            let (t, y, k1) = (self.t, self.y, self.k1);
            let f = &mut self.f;
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + h, &y1);
            let t1 = if last { t_limit } else { t + h };
            let mut accept = true;
            let mut fac = 1.0;
            if !self.fixed {
                let mut err = 0.0;
                for i in 0..N {
                    let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                    err += (e / self.scale(y[i], y1[i])).powi(2);
                }
                let err = (err / N as f64).sqrt();
                let violates = (0..self.nonnegative).any(|i| y1[i] < -self.settings.abs_tol);
                accept = err <= 1.0 && err.is_finite() && !violates;
                fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) } else { 0.2 };
                if violates {
                    fac = fac.min(0.5);
                }
                if !accept {
                    fac = fac.min(1.0);
                }
            }
            self.steps += 1;
            if accept {
                let rc3 = std::array::from_fn(|i| h * k1[i] - (y1[i] - y[i]));
                let rc4: [f64; N] = std::array::from_fn(|i| (y1[i] - y[i]) - h * k7[i] - rc3[i]);
                let rc5 = std::array::from_fn(|i| h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]));
                let step = Step { t0: t, t1, y0: y, y1, rc: [rc3, rc4, rc5] };
                self.t = t1;
                self.y = y1;
                self.k1 = k7;
                if !self.fixed {
                    // Keep the unclipped step size for the next step.
                    let base = if last { self.h } else { h };
                    self.h = base * fac;
                }
                return Ok(step);
            }
            self.h = h * fac;
            if self.h.abs() < self.settings.min_step {
                return Err(Error::StepUnderflow { t: self.t });
            }
        }
    }

    /// One accepted step without a time limit.
    pub fn step(&mut self) -> Result<Step<N>> {
        self.step_until(self.h.signum() * f64::INFINITY)
    }
}

/// Fraction of the real stability boundary of the method (about 3.3) used
/// for the step cap.
pub const STABILITY_FACTOR: f64 = 3.0;

/// Spectral radius of the Jacobian of the kinetics at `y`.
pub fn spectral_radius(y: &[f64], a: Params) -> f64 {
    let j = jacobian(State::new(y[0], y[1]), a);
    let half_tr = 0.5 * (j[0][0] + j[1][1]);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = half_tr * half_tr - det;
    if disc >= 0.0 {
        half_tr.abs() + disc.sqrt()
    } else {
        det.sqrt()
    }
}

/// Step cap `STABILITY_FACTOR / ρ(Df(y))` for the kinetics.
pub fn gs_step_limit<const N: usize>(a: Params) -> impl Fn(&[f64; N]) -> f64 {
    move |y| STABILITY_FACTOR / spectral_radius(y, a)
}

/// Right-hand side of the kinetics as an ODE closure.
pub fn gs_rhs(a: Params) -> impl FnMut(f64, &[f64; 2]) -> [f64; 2] {
    move |_, y| vector_field(State::new(y[0], y[1]), a)
}

/// Kinetics with its variational equation: `(u, v, Φ00, Φ01, Φ10, Φ11)`,
/// `Φ' = Df Φ`, `Φ(0) = I`.
pub fn gs_variational(a: Params, sign: f64) -> impl FnMut(f64, &[f64; 6]) -> [f64; 6] {
    move |_, y| {
        let p = State::new(y[0], y[1]);
        let f = vector_field(p, a);
        let j = jacobian(p, a);
        [
            sign * f[0],
            sign * f[1],
            sign * (j[0][0] * y[2] + j[0][1] * y[4]),
            sign * (j[0][0] * y[3] + j[0][1] * y[5]),
            sign * (j[1][0] * y[2] + j[1][1] * y[4]),
            sign * (j[1][0] * y[3] + j[1][1] * y[5]),
        ]
    }
}

/// Sampled trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn last(&self) -> State {
        *self.states.last().expect("nonempty trajectory")
    }
}

/// Integrate the kinetics from `p0` over `[0, t_end]` (backward when
/// `t_end < 0`), recording every accepted step. Steps that leave the closed
/// first quadrant by more than `abs_tol` are rejected.
pub fn integrate(p0: State, a: Params, t_end: f64, s: IntegratorSettings) -> Result<Trajectory> {
    if !p0.is_admissible(0.0) {
        return Err(Error::Domain(format!("initial state {p0:?} is outside the first quadrant")));
    }
    let sign = if t_end < 0.0 { -1.0 } else { 1.0 };
    let mut solver = Dopri5::new(move |_, y: &[f64; 2]| {
        let f = vector_field(State::new(y[0], y[1]), a);
        [sign * f[0], sign * f[1]]
    }, 0.0, p0.to_array(), 1.0, s)
    .with_nonnegative(2)
    .with_step_limit(gs_step_limit(a));
    let mut out = Trajectory { times: vec![0.0], states: vec![p0] };
    let horizon = t_end.abs();
    while solver.t() < horizon {
        let st = solver.step_until(horizon)?;
        out.times.push(sign * st.t1);
        out.states.push(State::from_array(st.y1));
    }
    Ok(out)
}

/// Fixed-step solution of the kinetics at `t_end`.
pub fn fixed_step_solution(a: Params, x0: State, t_end: f64, h: f64) -> Result<[f64; 2]> {
    let mut solver = Dopri5::fixed(gs_rhs(a), 0.0, x0.to_array(), h);
    while solver.t() < t_end {
        solver.step_until(t_end)?;
    }
    Ok(*solver.y())
}

/// Empirical orders of convergence from successive step halvings, measured
/// against a tight-tolerance adaptive reference: `log2(e(h) / e(h/2))` for
/// each consecutive pair of `hs = [h, h/2, h/4, …]`.
pub fn self_convergence_orders(a: Params, x0: State, t_end: f64, hs: &[f64]) -> Result<Vec<f64>> {
    let reference = integrate(x0, a, t_end, IntegratorSettings::with_tol(1e-14, 1e-16))?.last();
    let errs: Vec<f64> = hs
        .iter()
        .map(|&h| fixed_step_solution(a, x0, t_end, h).map(|y| (y[0] - reference.u).hypot(y[1] - reference.v)))
        .collect::<Result<_>>()?;
    Ok(errs.windows(2).zip(hs.windows(2)).map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_dense_output() {
        let mut s = Dopri5::new(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], 1.0, IntegratorSettings::with_tol(1e-12, 1e-14));
        let mut worst: f64 = 0.0;
        while s.t() < 10.0 {
            let st = s.step_until(10.0).unwrap();
            for i in 1..4 {
                let t = st.t0 + (st.t1 - st.t0) * i as f64 / 4.0;
                let y = st.eval(t);
                worst = worst.max((y[0] - t.cos()).abs());
            }
        }
        assert!((s.y()[0] - 10f64.cos()).abs() < 1e-10);
        assert!(worst < 1e-8, "dense output error {worst}");
    }

    #[test]
    fn backward_integration_returns() {
        let a = Params { k: 0.05, f: 0.03 };
        let s = IntegratorSettings::with_tol(1e-12, 1e-14);
        let fwd = integrate(State::new(0.6, 0.2), a, 5.0, s).unwrap();
        let back = integrate(fwd.last(), a, -5.0, s).unwrap();
        assert!(back.last().dist(&State::new(0.6, 0.2)) < 1e-9);
        assert_eq!(*back.times.last().unwrap(), -5.0);
    }

    #[test]
    fn event_location_on_circle() {
        let mut s = Dopri5::new(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], 1.0, IntegratorSettings::with_tol(1e-12, 1e-14));
        loop {
            let st = s.step().unwrap();
            if let Some((t, _)) = st.locate(|_, y| y[0], -1) {
                assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
                break;
            }
        }
    }
}
