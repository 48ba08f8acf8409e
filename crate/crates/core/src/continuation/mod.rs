//! Continuation of bifurcation curves and periodic orbits.
//!
//! A curve is the zero set of `G: R^{n+1} -> R^n`. The engine performs
//! pseudo-arclength continuation: a secant (initially null-vector)
//! predictor, a Newton corrector on the bordered system
//! `[G(x); t·(x - x_pred)] = 0`, and step-size adaptation. Sign changes of
//! problem-specific test functions between accepted points are refined by
//! Illinois iteration along the chord with re-correction onto the curve.

pub mod curves;
pub mod cycles;
pub mod homoclinic;
pub mod lpc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Params, State};
use cycles::CycleRepr;

pub use curves::{fold_curve, hopf_curve, FoldProblem, HopfProblem};
pub use cycles::{return_map, shoot_cycle, Section};
pub use homoclinic::{homoclinic_curve, locate_homoclinic, separatrix_splitting, splitting_report, tangency_exponent, HomoclinicPoint, Splitting, TangencyFit};
pub use lpc::{lpc_at, lpc_curve, lpc_from_pair, lpc_settings, lpc_tangent_angle, wedge_point, LpcPoint, LpcProblem};

/// Codimension-two points detected on codimension-one curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    BogdanovTakens,
    GeneralizedHopf,
}

impl SpecialKind {
    pub fn tag(&self) -> &'static str {
        match self {
            SpecialKind::BogdanovTakens => "BT",
            SpecialKind::GeneralizedHopf => "GH",
        }
    }
}

/// Problem-specific auxiliary data attached to a curve point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Aux {
    Equilibrium(State),
    Cycle(CycleRepr),
    Homoclinic { bracket: f64 },
}

/// One point of a continued curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub params: Params,
    pub aux: Aux,
    /// Unit tangent in the unknowns of the defining system.
    pub tangent: Vec<f64>,
    pub arc_step: f64,
    pub label: Option<SpecialKind>,
}

/// Why a continuation run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    MaxSteps,
    DomainExit,
    StepUnderflow,
}

/// A located special point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialPoint {
    pub kind: SpecialKind,
    pub point: CurvePoint,
    /// Test-function value at the located point.
    pub test_value: f64,
}

/// A continued curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub points: Vec<CurvePoint>,
    pub special: Vec<SpecialPoint>,
    pub termination: Termination,
}

/// Defining system of a curve.
pub trait DefiningSystem {
    /// Number of unknowns (`n + 1`).
    fn dim(&self) -> usize;
    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>>;
    /// Jacobian `n x (n+1)`; forward differences by default.
    fn jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        fd_jacobian(self, x, self.fd_step())
    }
    fn fd_step(&self) -> f64 {
        1e-7
    }
    /// Test functions whose sign changes mark special points.
    fn test_functions(&self, _x: &DVector<f64>) -> Vec<(SpecialKind, f64)> {
        Vec::new()
    }
    fn in_domain(&self, x: &DVector<f64>) -> bool;
    fn params(&self, x: &DVector<f64>) -> Params;
    fn aux(&self, x: &DVector<f64>) -> Aux;
}

/// Forward-difference Jacobian.
pub fn fd_jacobian<S: DefiningSystem + ?Sized>(sys: &S, x: &DVector<f64>, h: f64) -> Result<DMatrix<f64>> {
    let g0 = sys.residual(x)?;
    let n = g0.len();
    let m = x.len();
    let mut jm = DMatrix::zeros(n, m);
    for c in 0..m {
        let mut xp = x.clone();
        let hc = h * (1.0 + x[c].abs());
        xp[c] += hc;
        let g1 = sys.residual(&xp)?;
        for r in 0..n {
            jm[(r, c)] = (g1[r] - g0[r]) / hc;
        }
    }
    Ok(jm)
}

/// Unit null vector of an `n x (n+1)` matrix via signed maximal minors.
pub fn null_vector(jm: &DMatrix<f64>) -> Option<DVector<f64>> {
    let m = jm.ncols();
    let mut t = DVector::zeros(m);
    for i in 0..m {
        let minor = jm.clone().remove_column(i);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        t[i] = sign * minor.determinant();
    }
    let norm = t.norm();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    Some(t / norm)
}

/// Continuation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuationSettings {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    pub growth: f64,
    pub shrink: f64,
    /// Orientation of the initial tangent: `+1` follows increasing `k`.
    pub direction: f64,
    /// Index of the unknown holding `k` (orientation reference).
    pub k_index: usize,
    pub locate_tol: f64,
}

impl Default for ContinuationSettings {
    fn default() -> Self {
        ContinuationSettings {
            initial_step: 1e-3,
            min_step: 1e-9,
            max_step: 5e-3,
            max_steps: 400,
            corrector_tol: 1e-10,
            max_corrector_iters: 8,
            growth: 1.3,
            shrink: 0.5,
            direction: 1.0,
            k_index: 2,
            locate_tol: 1e-12,
        }
    }
}

/// Newton on `[G(x); t·(x - anchor)] = 0`; returns the point and the
/// iteration count.
fn correct<S: DefiningSystem + ?Sized>(sys: &S, mut x: DVector<f64>, anchor: &DVector<f64>, t: &DVector<f64>, s: &ContinuationSettings) -> Option<(DVector<f64>, usize)> {
    let m = x.len();
    for it in 1..=s.max_corrector_iters {
        let g = sys.residual(&x).ok()?;
        let jm = sys.jacobian(&x).ok()?;
        let mut big = DMatrix::zeros(m, m);
        let mut rhs = DVector::zeros(m);
        for r in 0..m - 1 {
            for c in 0..m {
                big[(r, c)] = jm[(r, c)];
            }
            rhs[r] = -g[r];
        }
        for c in 0..m {
            big[(m - 1, c)] = t[c];
        }
        rhs[m - 1] = -t.dot(&(&x - anchor));
        let dx = big.lu().solve(&rhs)?;
        x += &dx;
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        if dx.norm() < 1e-12 * (1.0 + x.norm()) || (dx.norm() < 1e-9 && sys.residual(&x).ok()?.norm() < s.corrector_tol) {
            let r = sys.residual(&x).ok()?.norm();
            if r < s.corrector_tol {
                return Some((x, it));
            }
        }
    }
    let r = sys.residual(&x).ok()?.norm();
    if r < s.corrector_tol {
        Some((x, s.max_corrector_iters))
    } else {
        None
    }
}

fn make_point<S: DefiningSystem + ?Sized>(sys: &S, x: &DVector<f64>, t: &DVector<f64>, h: f64) -> CurvePoint {
    CurvePoint { params: sys.params(x), aux: sys.aux(x), tangent: t.iter().copied().collect(), arc_step: h, label: None }
}

/// Locate a zero of test function `idx` between two accepted points.
fn locate_special<S: DefiningSystem + ?Sized>(sys: &S, xa: &DVector<f64>, xb: &DVector<f64>, ta: f64, tb: f64, idx: usize, s: &ContinuationSettings) -> Option<(DVector<f64>, f64)> {
    let chord = xb - xa;
    let len = chord.norm();
    let dir = &chord / len;
    let eval = |sig: f64| -> Option<(DVector<f64>, f64)> {
        let anchor = xa + &chord * sig;
        let (x, _) = correct(sys, anchor.clone(), &anchor, &dir, s)?;
        let tv = sys.test_functions(&x).get(idx)?.1;
        Some((x, tv))
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let (mut flo, mut fhi) = (ta, tb);
    let mut best = if ta.abs() < tb.abs() { (xa.clone(), ta) } else { (xb.clone(), tb) };
    let mut side = 0;
    for _ in 0..200 {
        if (hi - lo) * len < s.locate_tol {
            break;
        }
        let mut sig = (lo * fhi - hi * flo) / (fhi - flo);
        if !(sig > lo && sig < hi) {
            sig = 0.5 * (lo + hi);
        }
        let (x, fv) = eval(sig)?;
        best = (x, fv);
        if fv == 0.0 {
            break;
        }
        if (fv > 0.0) == (flo > 0.0) {
            lo = sig;
            flo = fv;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = sig;
            fhi = fv;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    Some(best)
}

/// Pseudo-arclength continuation from a seed (corrected first).
pub fn continue_branch<S: DefiningSystem + ?Sized>(sys: &S, seed: DVector<f64>, s: &ContinuationSettings) -> Result<Branch> {
    let jm0 = sys.jacobian(&seed)?;
    let mut t = null_vector(&jm0).ok_or(Error::SeedInvalid(f64::NAN))?;
    if t[s.k_index] * s.direction < 0.0 {
        t = -t;
    }
    // Correct the seed onto the curve, orthogonally to the tangent.
    let r0 = sys.residual(&seed)?.norm();
    let (mut x, _) = correct(sys, seed.clone(), &seed, &t, s).ok_or(Error::SeedInvalid(r0))?;
    if !sys.in_domain(&x) {
        return Err(Error::SeedInvalid(r0));
    }
    let mut h = s.initial_step;
    let mut points = vec![make_point(sys, &x, &t, 0.0)];
    let mut special = Vec::new();
    let mut tests = sys.test_functions(&x);
    let mut termination = Termination::MaxSteps;
    let mut prev: Option<DVector<f64>> = None;
    while points.len() < s.max_steps {
        // Tangent: fresh null vector oriented along the previous direction.
        let jm = sys.jacobian(&x)?;
        if let Some(mut tn) = null_vector(&jm) {
            let reference = match &prev {
                Some(p) => &x - p,
                None => t.clone(),
            };
            if tn.dot(&reference) < 0.0 {
                tn = -tn;
            }
            t = tn;
        }
        let pred = &x + &t * h;
        match correct(sys, pred.clone(), &pred, &t, s) {
            Some((xn, iters)) if (&xn - &x).norm() < 3.0 * h && (&xn - &x).dot(&t) > 0.0 => {
                if !sys.in_domain(&xn) {
                    termination = Termination::DomainExit;
                    break;
                }
                let new_tests = sys.test_functions(&xn);
                for (i, ((kind, ta), (_, tb))) in tests.iter().zip(new_tests.iter()).enumerate() {
                    if ta.is_finite() && tb.is_finite() && (*ta > 0.0) != (*tb > 0.0) {
                        if let Some((xs, tv)) = locate_special(sys, &x, &xn, *ta, *tb, i, s) {
                            let mut pt = make_point(sys, &xs, &t, (&xs - &x).norm());
                            pt.label = Some(*kind);
                            special.push(SpecialPoint { kind: *kind, point: pt, test_value: tv });
                        }
                    }
                }
                tests = new_tests;
                points.push(make_point(sys, &xn, &t, h));
                prev = Some(x);
                x = xn;
                if iters <= 3 {
                    h = (h * s.growth).min(s.max_step);
                }
            }
            _ => {
                h *= s.shrink;
                if h < s.min_step {
                    termination = Termination::StepUnderflow;
                    break;
                }
            }
        }
    }
    Ok(Branch { points, special, termination })
}
