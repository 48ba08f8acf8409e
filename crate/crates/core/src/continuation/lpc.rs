//! Limit points of cycles: the system `{D(s) = 0, P'(s) = 1}` in
//! `(s, k, F)`, where `s` is the section coordinate of the cycle.

use nalgebra::{DVector, Matrix2, Vector2};
use serde::Serialize;

use super::cycles::{return_map, CycleRepr, ReturnOptions, Section};
use super::{continue_branch, Aux, Branch, ContinuationSettings, DefiningSystem};
use crate::bautin::GH;
use crate::dynamics::census::limit_cycle_census;
use crate::equilibria::{equilibrium_pair, hopf_f};
use crate::error::{Error, Result};
use crate::model::Params;

/// Smallest cycle amplitude followed before the branch is stopped (the
/// curve ends at GH where the cycle shrinks to `p_mp`).
pub const LPC_MIN_AMPLITUDE: f64 = 2e-3;

/// Defining system of the LPC curve.
#[derive(Debug, Clone, Copy)]
pub struct LpcProblem {
    pub opts: ReturnOptions,
}

impl Default for LpcProblem {
    fn default() -> Self {
        LpcProblem { opts: ReturnOptions::precise() }
    }
}

impl LpcProblem {
    fn eval(&self, s: f64, a: Params) -> Result<(f64, f64, CycleRepr)> {
        let sec = Section::at(a)?;
        let r = return_map(a, &sec, s, &self.opts)?;
        let cyc = CycleRepr { section_point: sec.point(s), period: r.time, nontrivial_multiplier: r.monodromy_det, section_normal: sec.normal, amplitude: s };
        Ok((r.s - s, r.derivative - 1.0, cyc))
    }
}

impl DefiningSystem for LpcProblem {
    fn dim(&self) -> usize {
        3
    }
    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let (d, m, _) = self.eval(x[0], Params { k: x[1], f: x[2] })?;
        Ok(DVector::from_vec(vec![d, m]))
    }
    fn fd_step(&self) -> f64 {
        1e-7
    }
    fn in_domain(&self, x: &DVector<f64>) -> bool {
        x[0] > LPC_MIN_AMPLITUDE && x[1] > 0.0 && x[2] > 0.0 && equilibrium_pair(Params { k: x[1], f: x[2] }).is_some()
    }
    fn params(&self, x: &DVector<f64>) -> Params {
        Params { k: x[1], f: x[2] }
    }
    fn aux(&self, x: &DVector<f64>) -> Aux {
        match self.eval(x[0], self.params(x)) {
            Ok((_, _, c)) => Aux::Cycle(c),
            Err(_) => Aux::Homoclinic { bracket: f64::NAN },
        }
    }
}

/// A solved LPC point at fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpcPoint {
    pub params: Params,
    pub cycle: CycleRepr,
}

/// Solve the LPC system in `(s, F)` at fixed `k` by Newton with
/// finite-difference Jacobian.
pub fn lpc_at(k: f64, f0: f64, s0: f64) -> Result<LpcPoint> {
    let sys = LpcProblem::default();
    let (mut s, mut f) = (s0, f0);
    for _ in 0..40 {
        let a = Params { k, f };
        let (d, m, cyc) = sys.eval(s, a)?;
        if d.abs() < 1e-12 && m.abs() < 1e-9 {
            return Ok(LpcPoint { params: a, cycle: cyc });
        }
        let hs = 1e-7;
        let hf = 1e-9;
        let (ds, ms, _) = sys.eval(s + hs, a)?;
        let (df, mf, _) = sys.eval(s, Params { k, f: f + hf })?;
        let j = Matrix2::new((ds - d) / hs, (df - d) / hf, (ms - m) / hs, (mf - m) / hf);
        let step = j.lu().solve(&Vector2::new(-d, -m)).ok_or(Error::NewtonDiverged)?;
        // Keep the update inside a trust region.
        let scale = (step[0].abs() / (0.2 * s)).max(step[1].abs() / 2e-5).max(1.0);
        s += step[0] / scale;
        f += step[1] / scale;
        if s <= 0.0 {
            return Err(Error::NewtonDiverged);
        }
    }
    Err(Error::NewtonDiverged)
}

/// Locate the fold of cycles at abscissa `k` from a parameter point where
/// two cycles coexist.
pub fn lpc_from_pair(seed: Params) -> Result<LpcPoint> {
    let cycles = limit_cycle_census(seed)?;
    if cycles.len() != 2 {
        return Err(Error::SeedInvalid(cycles.len() as f64));
    }
    // The fold cycle starts from the extremum of D between the two cycles.
    let sec = Section::at(seed)?;
    let opts = ReturnOptions::scan();
    let (lo, hi) = (cycles[0].amplitude, cycles[1].amplitude);
    let mut best = (0.5 * (lo + hi), 0.0f64);
    for i in 1..40 {
        let s = lo + (hi - lo) * i as f64 / 40.0;
        if let Ok(r) = return_map(seed, &sec, s, &opts) {
            if (r.s - s).abs() > best.1 {
                best = (s, (r.s - s).abs());
            }
        }
    }
    lpc_at(seed.k, seed.f, best.0)
}

/// A point just inside the two-cycle wedge below the Hopf curve at `k`.
pub fn wedge_point(k: f64) -> Result<Params> {
    let fh = hopf_f(k)?;
    let mut d = 1e-7;
    while d < 1e-3 {
        let a = Params { k, f: fh - d };
        if limit_cycle_census(a)?.len() == 2 {
            return Ok(a);
        }
        d *= 3.0;
    }
    Err(Error::SeedInvalid(k))
}

/// Continue the LPC curve from a two-cycle seed towards GH (increasing `k`).
pub fn lpc_curve(seed_near: Params, settings: &ContinuationSettings) -> Result<Branch> {
    let p = lpc_from_pair(seed_near)?;
    let seed = DVector::from_vec(vec![p.cycle.amplitude, p.params.k, p.params.f]);
    let mut s = *settings;
    s.k_index = 1;
    continue_branch(&LpcProblem::default(), seed, &s)
}

/// Default continuation controls for the LPC curve.
pub fn lpc_settings() -> ContinuationSettings {
    ContinuationSettings { initial_step: 2e-4, min_step: 1e-7, max_step: 1e-3, max_steps: 200, corrector_tol: 1e-10, k_index: 1, ..Default::default() }
}

/// Angle between the LPC and Hopf tangents at GH, from a cubic fit of
/// `F_lpc(k) - F_hopf(k)` (constrained to vanish at GH) over the given
/// points.
pub fn lpc_tangent_angle(points: &[(f64, f64)]) -> f64 {
    let rows: Vec<(f64, f64)> = points.iter().filter_map(|&(k, f)| hopf_f(k).ok().map(|h| (k - GH.k, f - h))).collect();
    let n = rows.len();
    let a = nalgebra::DMatrix::from_fn(n, 3, |r, c| rows[r].0.powi(c as i32 + 1));
    let b = nalgebra::DVector::from_fn(n, |r, _| rows[r].1);
    let coef = a.clone().svd(true, true).solve(&b, 1e-300).unwrap_or_else(|_| nalgebra::DVector::zeros(3));
    let h = 1e-6;
    let hopf_slope = (hopf_f(GH.k + h).unwrap() - hopf_f(GH.k - h).unwrap()) / (2.0 * h);
    ((hopf_slope + coef[0]).atan() - hopf_slope.atan()).abs()
}
