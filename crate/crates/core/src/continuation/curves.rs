//! Fold (saddle-node) and Hopf curves as defining systems in `(u, v, k, F)`.

use nalgebra::{DMatrix, DVector};

use super::{continue_branch, Aux, Branch, ContinuationSettings, DefiningSystem, SpecialKind};
use crate::bautin::l1_kuz_at;
use crate::bt::transversality_matrix;
use crate::equilibria::{equilibrium_pair, hopf_f, saddle_node_f};
use crate::error::{Error, Result};
use crate::model::{jet, Kinetics, Params, State};

fn unpack(x: &DVector<f64>) -> (State, Params) {
    (State::new(x[0], x[1]), Params { k: x[2], f: x[3] })
}

fn in_box(x: &DVector<f64>) -> bool {
    x[2] > 1e-6 && x[3] > 1e-8 && x[2] < 0.2 && x[3] < 0.3 && x[0] > 0.0 && x[1] > 0.0
}

/// Rows of the Jacobian of `(f1, f2, tr, det)` in `(u, v, k, F)`.
fn rows(x: &DVector<f64>) -> [[f64; 4]; 4] {
    transversality_matrix(&Kinetics::canonical(), &x[0], &x[1], &x[2], &x[3])
}

/// Equilibrium with zero determinant: `(f1, f2, det) = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FoldProblem;

impl DefiningSystem for FoldProblem {
    fn dim(&self) -> usize {
        4
    }
    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let (p, a) = unpack(x);
        let j = jet(p, a);
        Ok(DVector::from_vec(vec![j.value[0], j.value[1], j.det()]))
    }
    fn jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        let m = rows(x);
        Ok(DMatrix::from_fn(3, 4, |r, c| m[if r < 2 { r } else { 3 }][c]))
    }
    fn test_functions(&self, x: &DVector<f64>) -> Vec<(SpecialKind, f64)> {
        let (p, a) = unpack(x);
        vec![(SpecialKind::BogdanovTakens, jet(p, a).trace())]
    }
    fn in_domain(&self, x: &DVector<f64>) -> bool {
        in_box(x)
    }
    fn params(&self, x: &DVector<f64>) -> Params {
        unpack(x).1
    }
    fn aux(&self, x: &DVector<f64>) -> Aux {
        Aux::Equilibrium(unpack(x).0)
    }
}

/// Equilibrium with zero trace: `(f1, f2, tr) = 0`. Beyond BT the curve
/// continues as a neutral saddle.
#[derive(Debug, Clone, Copy, Default)]
pub struct HopfProblem;

impl DefiningSystem for HopfProblem {
    fn dim(&self) -> usize {
        4
    }
    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let (p, a) = unpack(x);
        let j = jet(p, a);
        Ok(DVector::from_vec(vec![j.value[0], j.value[1], j.trace()]))
    }
    fn jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        let m = rows(x);
        Ok(DMatrix::from_fn(3, 4, |r, c| m[r][c]))
    }
    fn test_functions(&self, x: &DVector<f64>) -> Vec<(SpecialKind, f64)> {
        let (p, a) = unpack(x);
        let det = jet(p, a).det();
        let l1 = if det > 0.0 { l1_kuz_at(p, a).unwrap_or(f64::NAN) } else { f64::NAN };
        vec![(SpecialKind::BogdanovTakens, det), (SpecialKind::GeneralizedHopf, l1)]
    }
    fn in_domain(&self, x: &DVector<f64>) -> bool {
        in_box(x)
    }
    fn params(&self, x: &DVector<f64>) -> Params {
        unpack(x).1
    }
    fn aux(&self, x: &DVector<f64>) -> Aux {
        Aux::Equilibrium(unpack(x).0)
    }
}

/// Seed on the Hopf curve at abscissa `k`.
pub fn hopf_seed(k: f64) -> Result<DVector<f64>> {
    let a = Params { k, f: hopf_f(k)? };
    let (p, _) = equilibrium_pair(a).ok_or(Error::SeedInvalid(f64::NAN))?;
    Ok(DVector::from_vec(vec![p.u, p.v, k, a.f]))
}

/// Seed on the lower saddle-node branch at abscissa `k`.
pub fn fold_seed(k: f64) -> Result<DVector<f64>> {
    let (_, lower) = saddle_node_f(k)?;
    let gamma = (lower + k) / lower;
    Ok(DVector::from_vec(vec![0.5, 0.5 / gamma, k, lower]))
}

/// Continue the Hopf curve from abscissa `k`.
pub fn hopf_curve(k: f64, settings: &ContinuationSettings) -> Result<Branch> {
    continue_branch(&HopfProblem, hopf_seed(k)?, settings)
}

/// Continue the saddle-node curve from the lower branch at abscissa `k`.
pub fn fold_curve(k: f64, settings: &ContinuationSettings) -> Result<Branch> {
    continue_branch(&FoldProblem, fold_seed(k)?, settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bautin::GH;

    #[test]
    fn hopf_branch_finds_bt_and_gh() {
        let s = ContinuationSettings::default();
        let b = hopf_curve(0.02, &s).unwrap();
        let bt = b.special.iter().find(|p| p.kind == SpecialKind::BogdanovTakens).expect("BT");
        let gh = b.special.iter().find(|p| p.kind == SpecialKind::GeneralizedHopf).expect("GH");
        assert!((bt.point.params.k - 0.0625).abs() < 1e-8 && (bt.point.params.f - 0.0625).abs() < 1e-8, "{:?}", bt.point.params);
        assert!((gh.point.params.k - GH.k).abs() < 1e-8 && (gh.point.params.f - GH.f).abs() < 1e-8, "{:?}", gh.point.params);
        for p in &b.points {
            let fh = hopf_f(p.params.k).unwrap();
            let fs = crate::equilibria::neutral_saddle_f(p.params.k).unwrap();
            let err = (p.params.f - fh).abs().min((p.params.f - fs).abs());
            assert!(err < 1e-8, "{:?} err {err}", p.params);
        }
    }

    #[test]
    fn fold_branch_tracks_closed_form() {
        let s = ContinuationSettings::default();
        let b = fold_curve(0.02, &s).unwrap();
        assert!(b.points.len() > 10);
        for p in &b.points {
            let (up, lo) = saddle_node_f(p.params.k).unwrap();
            let err = (p.params.f - up).abs().min((p.params.f - lo).abs());
            assert!(err < 1e-8, "{:?} err {err}", p.params);
        }
        assert!(b.special.iter().any(|p| p.kind == SpecialKind::BogdanovTakens));
    }
}
