//! Equilibria, their linear stability, and the closed-form bifurcation
//! curves of the parameter plane.
//!
//! With `gamma = (F+k)/F` and `Delta = 1 - 4 F gamma²` the nontrivial
//! equilibria are
//!
//! ```text
//!   p_mp = ((1 - √Δ)/2, (1 + √Δ)/(2γ)),   p_pm = ((1 + √Δ)/2, (1 - √Δ)/(2γ)),
//! ```
//!
//! and at a nontrivial equilibrium `det = (v² - F)(F + k)`, `tr = k - v²`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::sqrt_exact;
use crate::model::{jacobian, vector_field, ExactParams, Kinetics, Params, State};

/// Default tolerance for tagging an equilibrium as nonhyperbolic.
pub const NONHYPERBOLIC_TOL: f64 = 1e-11;
/// Residual above which `classify` refuses a point.
pub const EQUILIBRIUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discriminants {
    pub gamma: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
}

pub fn discriminants(a: Params) -> Discriminants {
    let gamma = a.gamma();
    Discriminants { gamma, delta: 1.0 - 4.0 * a.f * gamma * gamma }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactDiscriminants {
    pub gamma: BigRational,
    pub delta: BigRational,
}

pub fn discriminants_exact(a: &ExactParams) -> ExactDiscriminants {
    let gamma = (&a.f + &a.k) / &a.f;
    let delta = BigRational::one() - BigRational::from_integer(4.into()) * &a.f * &gamma * &gamma;
    ExactDiscriminants { gamma, delta }
}

/// Nontrivial part of the equilibrium set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nontrivial {
    None,
    Degenerate { point: State },
    Pair { p_mp: State, p_pm: State },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumSet {
    pub p0: State,
    pub nontrivial: Nontrivial,
}

impl EquilibriumSet {
    pub fn p_mp(&self) -> Option<State> {
        match self.nontrivial {
            Nontrivial::Pair { p_mp, .. } => Some(p_mp),
            _ => None,
        }
    }
    pub fn p_pm(&self) -> Option<State> {
        match self.nontrivial {
            Nontrivial::Pair { p_pm, .. } => Some(p_pm),
            _ => None,
        }
    }
    pub fn count(&self) -> usize {
        match self.nontrivial {
            Nontrivial::None => 1,
            Nontrivial::Degenerate { .. } => 2,
            Nontrivial::Pair { .. } => 3,
        }
    }
}

/// Closed-form nontrivial equilibria for `Delta > 0`, written in a
/// cancellation-free form (`u_-` and `v_-` through `4Fγ² = 1 - Δ`).
pub fn equilibrium_pair(a: Params) -> Option<(State, State)> {
    let d = discriminants(a);
    if d.delta <= 0.0 {
        return None;
    }
    let s = d.delta.sqrt();
    let g = d.gamma;
    let u_minus = 2.0 * a.f * g * g / (1.0 + s);
    let v_plus = (1.0 + s) / (2.0 * g);
    let u_plus = (1.0 + s) / 2.0;
    let v_minus = 2.0 * a.f * g / (1.0 + s);
    Some((State::new(u_minus, v_plus), State::new(u_plus, v_minus)))
}

pub fn equilibria(a: Params) -> EquilibriumSet {
    let d = discriminants(a);
    let nontrivial = if d.delta > 0.0 {
        let (p_mp, p_pm) = equilibrium_pair(a).expect("Delta > 0");
        Nontrivial::Pair { p_mp, p_pm }
    } else if d.delta == 0.0 {
        Nontrivial::Degenerate { point: State::new(0.5, 0.5 / d.gamma) }
    } else {
        Nontrivial::None
    };
    EquilibriumSet { p0: State::new(1.0, 0.0), nontrivial }
}

/// Exact nontrivial equilibria; available when `√Δ` is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactNontrivial {
    None,
    Degenerate([BigRational; 2]),
    Pair { p_mp: [BigRational; 2], p_pm: [BigRational; 2] },
    /// `Δ > 0` but irrational `√Δ`.
    Irrational,
}

pub fn equilibria_exact(a: &ExactParams) -> ExactNontrivial {
    let d = discriminants_exact(a);
    let half = BigRational::new(1.into(), 2.into());
    if d.delta.is_negative() {
        return ExactNontrivial::None;
    }
    if d.delta.is_zero() {
        return ExactNontrivial::Degenerate([half.clone(), half / &d.gamma]);
    }
    let Some(s) = sqrt_exact(&d.delta) else { return ExactNontrivial::Irrational };
    let one = BigRational::one();
    let two_g = &d.gamma * BigRational::from_integer(2.into());
    ExactNontrivial::Pair {
        p_mp: [(&one - &s) * &half, (&one + &s) / &two_g],
        p_pm: [(&one + &s) * &half, (&one - &s) / &two_g],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonhyperbolicKind {
    /// `trace = 0`, `det > 0`.
    HopfCandidate,
    /// A single zero eigenvalue.
    Fold,
    /// Double zero eigenvalue.
    BogdanovTakens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumClass {
    Saddle,
    StableNode,
    UnstableNode,
    StableSpiral,
    UnstableSpiral,
    Nonhyperbolic(NonhyperbolicKind),
}

impl EquilibriumClass {
    pub fn is_saddle(&self) -> bool {
        matches!(self, Self::Saddle)
    }
    pub fn is_stable(&self) -> bool {
        matches!(self, Self::StableNode | Self::StableSpiral)
    }
    pub fn is_unstable(&self) -> bool {
        matches!(self, Self::UnstableNode | Self::UnstableSpiral)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenvalues {
    Real { l1: f64, l2: f64 },
    Complex { re: f64, im: f64 },
}

impl Eigenvalues {
    pub fn as_complex(&self) -> [Complex64; 2] {
        match *self {
            Eigenvalues::Real { l1, l2 } => [Complex64::new(l1, 0.0), Complex64::new(l2, 0.0)],
            Eigenvalues::Complex { re, im } => [Complex64::new(re, im), Complex64::new(re, -im)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub trace: f64,
    pub det: f64,
    pub disc: f64,
    pub eigenvalues: Eigenvalues,
    pub class: EquilibriumClass,
}

/// Eigenvalues of a 2×2 matrix from its trace and determinant; real pairs
/// are ordered `l1 <= l2` and computed without cancellation.
pub fn eigenvalues_from(trace: f64, det: f64) -> Eigenvalues {
    let disc = trace * trace - 4.0 * det;
    if disc >= 0.0 {
        let big = 0.5 * (trace + trace.signum() * disc.sqrt());
        let (a, b) = if big == 0.0 { (0.0, 0.0) } else { (big, det / big) };
        Eigenvalues::Real { l1: a.min(b), l2: a.max(b) }
    } else {
        Eigenvalues::Complex { re: trace / 2.0, im: (-disc).sqrt() / 2.0 }
    }
}

/// Eigenvalues of a 2×2 matrix; triangular matrices return their diagonal
/// exactly.
pub fn eigenvalues_of(j: &[[f64; 2]; 2]) -> Eigenvalues {
    if j[0][1] == 0.0 || j[1][0] == 0.0 {
        let (a, b) = (j[0][0], j[1][1]);
        return Eigenvalues::Real { l1: a.min(b), l2: a.max(b) };
    }
    eigenvalues_from(j[0][0] + j[1][1], j[0][0] * j[1][1] - j[0][1] * j[1][0])
}

/// Classify from trace and determinant with the nonhyperbolic tolerance `tol`.
pub fn class_from(trace: f64, det: f64, tol: f64) -> EquilibriumClass {
    use EquilibriumClass::*;
    if det.abs() <= tol {
        if trace.abs() <= tol {
            Nonhyperbolic(NonhyperbolicKind::BogdanovTakens)
        } else {
            Nonhyperbolic(NonhyperbolicKind::Fold)
        }
    } else if det < 0.0 {
        Saddle
    } else if trace.abs() <= tol {
        Nonhyperbolic(NonhyperbolicKind::HopfCandidate)
    } else {
        let spiral = trace * trace - 4.0 * det < 0.0;
        match (trace < 0.0, spiral) {
            (true, true) => StableSpiral,
            (true, false) => StableNode,
            (false, true) => UnstableSpiral,
            (false, false) => UnstableNode,
        }
    }
}

/// Exact classification from rational trace and determinant.
pub fn class_exact(trace: &BigRational, det: &BigRational) -> EquilibriumClass {
    use EquilibriumClass::*;
    if det.is_zero() {
        if trace.is_zero() {
            Nonhyperbolic(NonhyperbolicKind::BogdanovTakens)
        } else {
            Nonhyperbolic(NonhyperbolicKind::Fold)
        }
    } else if det.is_negative() {
        Saddle
    } else if trace.is_zero() {
        Nonhyperbolic(NonhyperbolicKind::HopfCandidate)
    } else {
        let disc = trace * trace - det * BigRational::from_integer(4.into());
        match (trace.is_negative(), disc.is_negative()) {
            (true, true) => StableSpiral,
            (true, false) => StableNode,
            (false, true) => UnstableSpiral,
            (false, false) => UnstableNode,
        }
    }
}

/// Linear stability of the equilibrium `p` with the default tolerance.
pub fn classify(p: State, a: Params) -> Result<StabilityReport> {
    classify_with_tol(p, a, NONHYPERBOLIC_TOL)
}

pub fn classify_with_tol(p: State, a: Params, tol: f64) -> Result<StabilityReport> {
    let r = vector_field(p, a);
    let residual = r[0].hypot(r[1]);
    if !(residual <= EQUILIBRIUM_TOL) {
        return Err(Error::NotAnEquilibrium { residual });
    }
    Ok(stability_at(p, a, tol))
}

/// Stability data of the linearization at `p` (no equilibrium check).
pub fn stability_at(p: State, a: Params, tol: f64) -> StabilityReport {
    let j = jacobian(p, a);
    let trace = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    StabilityReport {
        trace,
        det,
        disc: trace * trace - 4.0 * det,
        eigenvalues: eigenvalues_of(&j),
        class: class_from(trace, det, tol),
    }
}

/// Exact trace and determinant of the linearization at an exact point.
pub fn trace_det_exact(p: &[BigRational; 2], a: &ExactParams, model: &Kinetics) -> (BigRational, BigRational) {
    let jet = model.jet(&p[0], &p[1], &a.k, &a.f);
    (jet.trace(), jet.det())
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k <= 1.0 / 16.0) {
        return Err(Error::Domain(format!("k must lie in (0, 1/16], got {k}")));
    }
    Ok(())
}

/// Saddle-node curve `4(F+k)² = F`: returns `(upper, lower)` branches
/// `((1-8k) ± √(1-16k))/8`. The lower branch is computed as `k²/upper`
/// (product of the roots) to avoid cancellation as `k → 0`.
pub fn saddle_node_f(k: f64) -> Result<(f64, f64)> {
    check_k(k)?;
    let upper = ((1.0 - 8.0 * k) + (1.0 - 16.0 * k).sqrt()) / 8.0;
    Ok((upper, k * k / upper))
}

/// Hopf curve of `p_mp`: `F = (√k - 2k - √(k - 4k√k))/2`.
pub fn hopf_f(k: f64) -> Result<f64> {
    check_k(k)?;
    let s = k.sqrt();
    Ok((s - 2.0 * k - (k - 4.0 * k * s).max(0.0).sqrt()) / 2.0)
}

/// Neutral-saddle curve of `p_pm` (trace zero at the saddle).
pub fn neutral_saddle_f(k: f64) -> Result<f64> {
    check_k(k)?;
    let s = k.sqrt();
    Ok((s - 2.0 * k + (k - 4.0 * k * s).max(0.0).sqrt()) / 2.0)
}

/// `disc(Df(p_mp))` as a function of the parameters (NaN when `p_mp` is absent).
pub fn disc_at_p_mp(a: Params) -> f64 {
    match equilibrium_pair(a) {
        Some((p, _)) => stability_at(p, a, 0.0).disc,
        None => f64::NAN,
    }
}

/// Bisection on a sign change of `g` over `[lo, hi]` down to width `tol`.
pub fn bisect(mut g: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut glo = g(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots in `F` of `disc(Df(p_mp)) = 0` between the lower saddle-node branch
/// and the Hopf curve, by a 512-cell scan followed by bisection.
pub fn disc_curve_f(k: f64) -> Result<Vec<f64>> {
    if !(k > 0.0 && k < 1.0 / 16.0) {
        return Err(Error::Domain(format!("k must lie in (0, 1/16), got {k}")));
    }
    let (_, lower) = saddle_node_f(k)?;
    let hopf = hopf_f(k)?;
    let (lo, hi) = (lower.min(hopf), lower.max(hopf));
    let cells = 512;
    let width = hi - lo;
    // Stay strictly inside the Delta > 0 region at the fold end.
    let grid = |i: usize| lo + width * (i as f64 / cells as f64).clamp(1e-9, 1.0);
    let g = |f: f64| disc_at_p_mp(Params { k, f });
    let mut roots = Vec::new();
    let mut prev = (grid(0), g(grid(0)));
    for i in 1..=cells {
        let f = grid(i);
        let val = g(f);
        if prev.1.is_finite() && val.is_finite() && (prev.1 > 0.0) != (val > 0.0) {
            roots.push(bisect(g, prev.0, f, 1e-15));
        }
        prev = (f, val);
    }
    Ok(roots)
}

/// The equilibrium surface in `(k, F, v)`: `G = F(F+k) - F v + (F+k) v²`.
pub fn surface_g(k: f64, f: f64, v: f64) -> f64 {
    f * (f + k) - f * v + (f + k) * v * v
}

/// `dG/dv = -F + 2(F+k) v`; its common zeros with `G` are the fold points.
pub fn singular_set_residual(k: f64, f: f64, v: f64) -> f64 {
    -f + 2.0 * (f + k) * v
}

/// Locate the Bogdanov–Takens point by Newton on `{f = 0, tr = 0, det = 0}`
/// in `(u, v, k, F)`, seeded on the `p_mp` branch. At nontrivial equilibria
/// `det = (v² - F)(F + k)`, so the determinant equation is replaced by its
/// factor `v² - F`; this removes the spurious degenerate solution at the
/// origin towards which the unfactored system drifts.
pub fn locate_bt(start: Params) -> Result<(Params, State)> {
    use nalgebra::{Matrix4, Vector4};
    let (p, _) = equilibrium_pair(start).ok_or_else(|| Error::Domain("seed has no p_mp".into()))?;
    let mut x = Vector4::new(p.u, p.v, start.k, start.f);
    for _ in 0..50 {
        let (u, v, k, f) = (x[0], x[1], x[2], x[3]);
        let r = Vector4::new(
            -u * v * v + f * (1.0 - u),
            u * v * v - (f + k) * v,
            -2.0 * f - k + 2.0 * u * v - v * v,
            v * v - f,
        );
        let jm = Matrix4::new(
            -(f + v * v), -2.0 * u * v, 0.0, 1.0 - u,
            v * v, 2.0 * u * v - (f + k), -v, -v,
            2.0 * v, 2.0 * u - 2.0 * v, -1.0, -2.0,
            0.0, 2.0 * v, 0.0, -1.0,
        );
        let dx = jm.lu().solve(&r).ok_or(Error::NewtonDiverged)?;
        x -= dx;
        if dx.norm() < 1e-15 {
            break;
        }
    }
    if !x.iter().all(|c| c.is_finite()) {
        return Err(Error::NewtonDiverged);
    }
    Ok((Params { k: x[2], f: x[3] }, State::new(x[0], x[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::q;

    #[test]
    fn bt_discriminants() {
        let d = discriminants(Params { k: 1.0 / 16.0, f: 1.0 / 16.0 });
        assert_eq!((d.gamma, d.delta), (2.0, 0.0));
        let d = discriminants(Params { k: 0.07, f: 0.02 });
        assert!((d.delta + 0.62).abs() < 1e-14);
    }

    #[test]
    fn exact_gh_equilibria() {
        let a = ExactParams::new(q(9, 256), q(3, 256)).unwrap();
        let d = discriminants_exact(&a);
        assert_eq!((d.gamma.clone(), d.delta.clone()), (q(4, 1), q(1, 4)));
        match equilibria_exact(&a) {
            ExactNontrivial::Pair { p_mp, p_pm } => {
                assert_eq!(p_mp, [q(1, 4), q(3, 16)]);
                assert_eq!(p_pm, [q(3, 4), q(1, 16)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn saddle_node_examples() {
        let (up, lo) = saddle_node_f(0.04).unwrap();
        assert!((up - 0.16).abs() < 1e-15 && (lo - 0.01).abs() < 1e-15);
        let (up, lo) = saddle_node_f(1.0 / 16.0).unwrap();
        assert_eq!((up, lo), (1.0 / 16.0, 1.0 / 16.0));
        assert!(saddle_node_f(0.07).is_err());
    }

    #[test]
    fn hopf_examples() {
        assert_eq!(hopf_f(1.0 / 16.0).unwrap(), 1.0 / 16.0);
        assert!((hopf_f(9.0 / 256.0).unwrap() - 3.0 / 256.0).abs() < 1e-16);
        assert!(hopf_f(0.0).is_err());
    }

    #[test]
    fn disc_curve_sits_between_fold_and_hopf() {
        let roots = disc_curve_f(0.05).unwrap();
        let (_, lower) = saddle_node_f(0.05).unwrap();
        let hopf = hopf_f(0.05).unwrap();
        assert!(!roots.is_empty());
        for r in roots {
            assert!(r > lower && r < hopf);
            assert!(disc_at_p_mp(Params { k: 0.05, f: r }).abs() < 1e-12);
        }
    }

    #[test]
    fn bt_newton() {
        let (a, p) = locate_bt(Params { k: 0.05, f: 0.05 }).unwrap();
        assert!((a.k - 0.0625).abs() < 1e-12 && (a.f - 0.0625).abs() < 1e-12);
        assert!((p.u - 0.5).abs() < 1e-12 && (p.v - 0.25).abs() < 1e-12);
    }
}
