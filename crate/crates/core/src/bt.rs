//! Bogdanov–Takens checkpoint at `(k, F) = (1/16, 1/16)`, `p = (1/2, 1/4)`.
//!
//! Parameters are shifted as `alpha = (F - 1/16, k - 1/16)` and the state is
//! shifted to the base point `(1/2, k/(2(F+k)))`, which is the BT equilibrium
//! at `alpha = 0`. The quadratic normal-form coefficients are projections of
//! the bilinear form onto a generalized eigenbasis of `A0`:
//!
//! ```text
//!   a20 = <B(v0,v0), w0>,  b20 = <B(v0,v0), w1>,  b11 = <B(v0,v1), w1>
//! ```
//!
//! and the bifurcation type is fixed by `s = sign(b20 (a20 + b11))`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{q, vector_field, Kinetics, Params, Scalar, State};
use crate::poly::rational_det;

type Q = BigRational;

/// Parameters `(k, F)` for a shift `alpha = (alpha1, alpha2)`.
pub fn bt_params(alpha: [f64; 2]) -> Params {
    Params { k: alpha[1] + 1.0 / 16.0, f: alpha[0] + 1.0 / 16.0 }
}

/// Base point `(1/2, k/(2(F+k)))` of the shifted coordinates.
pub fn shifted_base(alpha: [f64; 2]) -> Result<State> {
    let a = bt_params(alpha);
    let s = a.f + a.k;
    if s == 0.0 {
        return Err(Error::SingularParameter);
    }
    Ok(State::new(0.5, a.k / (2.0 * s)))
}

/// The field in shifted coordinates: `f(base(alpha) + x, params(alpha))`.
pub fn shifted_field(x: [f64; 2], alpha: [f64; 2]) -> Result<[f64; 2]> {
    let b = shifted_base(alpha)?;
    Ok(vector_field(State::new(b.u + x[0], b.v + x[1]), bt_params(alpha)))
}

/// Generalized eigenbasis of `A0` with its dual basis.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanBasis {
    pub v0: [Q; 2],
    pub v1: [Q; 2],
    pub w0: [Q; 2],
    pub w1: [Q; 2],
}

fn dot(a: &[Q; 2], b: &[Q; 2]) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn mat_vec(m: &[[Q; 2]; 2], x: &[Q; 2]) -> [Q; 2] {
    [&m[0][0] * &x[0] + &m[0][1] * &x[1], &m[1][0] * &x[0] + &m[1][1] * &x[1]]
}

fn mat_t_vec(m: &[[Q; 2]; 2], x: &[Q; 2]) -> [Q; 2] {
    [&m[0][0] * &x[0] + &m[1][0] * &x[1], &m[0][1] * &x[0] + &m[1][1] * &x[1]]
}

impl JordanBasis {
    /// The basis used throughout: `v0=(-2,1)`, `v1=(0,8)`, `w0=(-1/2,0)`, `w1=(1/16,1/8)`.
    pub fn standard() -> Self {
        JordanBasis {
            v0: [q(-2, 1), q(1, 1)],
            v1: [q(0, 1), q(8, 1)],
            w0: [q(-1, 2), q(0, 1)],
            w1: [q(1, 16), q(1, 8)],
        }
    }

    /// Another admissible basis: `v0' = c v0`, `v1' = c v1 + t v0`, with the
    /// dual vectors `w1' = w1/c`, `w0' = (w0 - (t/c) w1)/c`.
    pub fn transformed(&self, c: &Q, t: &Q) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Domain("basis scale must be nonzero".into()));
        }
        let scale = |x: &[Q; 2], s: &Q| [&x[0] * s, &x[1] * s];
        let add = |x: [Q; 2], y: [Q; 2]| [&x[0] + &y[0], &x[1] + &y[1]];
        let tc = t / c;
        Ok(JordanBasis {
            v0: scale(&self.v0, c),
            v1: add(scale(&self.v1, c), scale(&self.v0, t)),
            w0: scale(&add(self.w0.clone(), scale(&self.w1, &-tc)), &(Q::from_integer(1.into()) / c)),
            w1: scale(&self.w1, &(Q::from_integer(1.into()) / c)),
        })
    }

    /// The six defining relations, each with its name and outcome.
    pub fn check(&self, a0: &[[Q; 2]; 2]) -> Vec<(&'static str, bool)> {
        let zero = [Q::zero(), Q::zero()];
        let one = q(1, 1);
        vec![
            ("A0 v0 = 0", mat_vec(a0, &self.v0) == zero),
            ("A0 v1 = v0", mat_vec(a0, &self.v1) == self.v0),
            ("A0^T w1 = 0", mat_t_vec(a0, &self.w1) == zero),
            ("A0^T w0 = w1", mat_t_vec(a0, &self.w0) == self.w1),
            ("<v0,w0> = <v1,w1> = 1", dot(&self.v0, &self.w0) == one && dot(&self.v1, &self.w1) == one),
            ("<v1,w0> = <v0,w1> = 0", dot(&self.v1, &self.w0).is_zero() && dot(&self.v0, &self.w1).is_zero()),
        ]
    }
}

pub fn jordan_basis() -> JordanBasis {
    JordanBasis::standard()
}

/// Linearization `A0` at the BT point, exactly.
pub fn a0_exact(model: &Kinetics) -> [[Q; 2]; 2] {
    model.jet(&q(1, 2), &q(1, 4), &q(1, 16), &q(1, 16)).jacobian
}

/// The BT frame: shift, basis and linear part.
#[derive(Debug, Clone, PartialEq)]
pub struct BtFrame {
    pub alpha: [f64; 2],
    pub basis: JordanBasis,
    pub a0: [[Q; 2]; 2],
}

impl BtFrame {
    pub fn new(alpha: [f64; 2]) -> Self {
        BtFrame { alpha, basis: jordan_basis(), a0: a0_exact(&Kinetics::canonical()) }
    }
}

/// Quadratic normal-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BtCoefficients {
    pub a20: f64,
    pub b20: f64,
    pub b11: f64,
}

/// Closed forms of the coefficients in terms of `alpha`.
pub fn bt_coefficients(alpha: [f64; 2]) -> Result<BtCoefficients> {
    let (a1, a2) = (alpha[0], alpha[1]);
    let den = 8.0 * a2 + 8.0 * a1 + 1.0;
    if den == 0.0 {
        return Err(Error::SingularParameter);
    }
    let num = 24.0 * a2 - 8.0 * a1 + 1.0;
    Ok(BtCoefficients { a20: -num / (2.0 * den), b20: -num / (16.0 * den), b11: 4.0 * (a1 - a2) / den })
}

/// Exact closed forms of the coefficients.
pub fn bt_coefficients_exact(alpha: &[Q; 2]) -> Result<[Q; 3]> {
    let (a1, a2) = (&alpha[0], &alpha[1]);
    let i = |n: i64| Q::from_integer(n.into());
    let den = i(8) * a2 + i(8) * a1 + i(1);
    if den.is_zero() {
        return Err(Error::SingularParameter);
    }
    let num = i(24) * a2 - i(8) * a1 + i(1);
    Ok([-&num / (i(2) * &den), -&num / (i(16) * &den), i(4) * (a1 - a2) / den])
}

/// Coefficients as projections of the bilinear form at the shifted base
/// point, in any scalar type.
pub fn projected_coefficients<T: Scalar>(model: &Kinetics, basis: &JordanBasis, alpha: &[T; 2]) -> Result<[T; 3]> {
    let sixteenth = T::from_ratio(&q(1, 16));
    let k = alpha[1].clone() + sixteenth.clone();
    let f = alpha[0].clone() + sixteenth;
    let s = f.clone() + k.clone();
    if s.is_zero() {
        return Err(Error::SingularParameter);
    }
    let u = T::from_ratio(&q(1, 2));
    let v = k.clone() / (T::from_i64(2) * s);
    let jet = model.jet(&u, &v, &k, &f);
    let conv = |x: &[Q; 2]| [T::from_ratio(&x[0]), T::from_ratio(&x[1])];
    let (v0, v1, w0, w1) = (conv(&basis.v0), conv(&basis.v1), conv(&basis.w0), conv(&basis.w1));
    let dot = |a: &[T; 2], b: &[T; 2]| a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone();
    let b00 = jet.bilinear(&v0, &v0);
    let b01 = jet.bilinear(&v0, &v1);
    Ok([dot(&b00, &w0), dot(&b00, &w1), dot(&b01, &w1)])
}

/// Jacobian of `(f1, f2, tr Df, det Df)` with respect to `(u, v, k, F)`.
pub fn transversality_matrix<T: Scalar>(model: &Kinetics, u: &T, v: &T, k: &T, f: &T) -> [[T; 4]; 4] {
    let g = T::from_ratio(&model.gain);
    let two = T::from_i64(2);
    let (u, v, k, f) = (u.clone(), v.clone(), k.clone(), f.clone());
    let vv = v.clone() * v.clone();
    let fk = f.clone() + k.clone();
    let z = T::zero();
    let one = T::one();
    [
        [-(f.clone() + vv.clone()), -(two.clone() * u.clone() * v.clone()), z, one.clone() - u.clone()],
        [g.clone() * vv.clone(), two.clone() * g.clone() * u.clone() * v.clone() - fk.clone(), -v.clone(), -v.clone()],
        [two.clone() * g.clone() * v.clone(), two.clone() * (g.clone() * u.clone() - v.clone()), -one, -two.clone()],
        [
            -(two.clone() * g.clone() * f.clone() * v.clone()),
            two.clone() * v.clone() * fk.clone() - two.clone() * g.clone() * u.clone() * f.clone(),
            f.clone() + vv.clone(),
            two.clone() * f.clone() + k - two.clone() * g * u * v + vv,
        ],
    ]
}

/// Exact BT verification data.
#[derive(Debug, Clone, PartialEq)]
pub struct BtReport {
    /// Field value at `(1/2, 1/4)` for `(k, F) = (1/16, 1/16)`.
    pub residual: [Q; 2],
    pub trace: Q,
    pub det: Q,
    pub basis_checks: Vec<(&'static str, bool)>,
    pub a20: Q,
    pub b20: Q,
    pub b11: Q,
    /// `sign(b20 (a20 + b11))`.
    pub s: i32,
    pub matrix: [[Q; 4]; 4],
    pub transversality_det: Q,
}

impl BtReport {
    /// The BT conditions: equilibrium, double-zero linear part, valid basis,
    /// `a20 + b11 != 0`, `b20 != 0`, transversality.
    pub fn nondegenerate(&self) -> bool {
        self.residual.iter().all(|r| r.is_zero())
            && self.trace.is_zero()
            && self.det.is_zero()
            && self.basis_checks.iter().all(|c| c.1)
            && !(&self.a20 + &self.b11).is_zero()
            && !self.b20.is_zero()
            && !self.transversality_det.is_zero()
    }
}

/// Exact BT verification for a model and basis.
pub fn bt_nondegeneracy_with(model: &Kinetics, basis: &JordanBasis) -> BtReport {
    let (u, v, k, f) = (q(1, 2), q(1, 4), q(1, 16), q(1, 16));
    let jet = model.jet(&u, &v, &k, &f);
    let zero2 = [Q::zero(), Q::zero()];
    let [a20, b20, b11] = projected_coefficients(model, basis, &zero2).expect("alpha = 0 is regular");
    let prod = &b20 * (&a20 + &b11);
    let s = if prod.is_positive() { 1 } else if prod.is_negative() { -1 } else { 0 };
    let matrix = transversality_matrix(model, &u, &v, &k, &f);
    let rows: Vec<Vec<Q>> = matrix.iter().map(|r| r.to_vec()).collect();
    BtReport {
        residual: jet.value.clone(),
        trace: jet.trace(),
        det: jet.det(),
        basis_checks: basis.check(&jet.jacobian),
        a20,
        b20,
        b11,
        s,
        transversality_det: rational_det(&rows),
        matrix,
    }
}

/// Exact BT verification of the canonical model in the standard basis.
pub fn bt_nondegeneracy() -> BtReport {
    bt_nondegeneracy_with(&Kinetics::canonical(), &jordan_basis())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_equilibrium() {
        assert_eq!(shifted_field([0.0, 0.0], [0.0, 0.0]).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn singular_guard() {
        assert_eq!(shifted_base([-1.0 / 16.0, -1.0 / 16.0]), Err(Error::SingularParameter));
        assert_eq!(bt_coefficients([-1.0 / 8.0, 0.0]), Err(Error::SingularParameter));
    }

    #[test]
    fn standard_basis_is_valid() {
        let a0 = a0_exact(&Kinetics::canonical());
        assert!(jordan_basis().check(&a0).iter().all(|c| c.1));
        assert_eq!(a0, [[q(-1, 8), q(-1, 4)], [q(1, 16), q(1, 8)]]);
    }

    #[test]
    fn diagonal_shift_keeps_a20() {
        for t in [0.01, -0.005] {
            assert!((bt_coefficients([t, t]).unwrap().a20 + 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn b11_example() {
        let c = bt_coefficients([0.01, 0.0]).unwrap();
        assert!((c.b11 - 0.04 / 1.08).abs() < 1e-15);
    }

    #[test]
    fn printed_matrix() {
        let r = bt_nondegeneracy();
        let expect = [
            [q(-1, 8), q(-1, 4), q(0, 1), q(1, 2)],
            [q(1, 16), q(1, 8), q(-1, 4), q(-1, 4)],
            [q(1, 2), q(1, 2), q(-1, 1), q(-2, 1)],
            [q(-1, 32), q(0, 1), q(1, 8), q(0, 1)],
        ];
        assert_eq!(r.matrix, expect);
        assert_eq!(r.transversality_det, q(-1, 512));
    }
}
