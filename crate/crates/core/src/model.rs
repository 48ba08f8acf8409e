//! The Gray–Scott kinetic vector field
//!
//! ```text
//!   u' = -u v² + F (1 - u)
//!   v' =  u v² - (F + k) v
//! ```
//!
//! together with its exact jets. The field is a cubic polynomial, so the
//! Jacobian, the bilinear form `B` and the (constant) trilinear form `C` are
//! all coded analytically. Every routine is generic over [`Scalar`] so the
//! same formulas run in `f64` and in exact rational arithmetic.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic needed to evaluate polynomial formulas: implemented for `f64`
/// and for exact rationals.
pub trait Scalar: Clone + PartialOrd + Num + Neg<Output = Self> + fmt::Debug {
    fn from_i64(n: i64) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
}

/// Point of the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Removal rate `k`.
    pub k: f64,
    /// Feed rate `F`.
    #[serde(rename = "F")]
    pub f: f64,
}

impl Params {
    /// Validating constructor: both rates must be finite and positive.
    pub fn new(k: f64, f: f64) -> Result<Self> {
        if !(k.is_finite() && f.is_finite() && k > 0.0 && f > 0.0) {
            return Err(Error::Domain(format!("need k > 0 and F > 0, got k={k}, F={f}")));
        }
        Ok(Params { k, f })
    }

    /// `gamma = (F + k) / F`.
    pub fn gamma(&self) -> f64 {
        (self.f + self.k) / self.f
    }
}

/// Phase-plane point `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub u: f64,
    pub v: f64,
}

impl State {
    pub const fn new(u: f64, v: f64) -> Self {
        State { u, v }
    }
    pub fn to_array(self) -> [f64; 2] {
        [self.u, self.v]
    }
    pub fn from_array(x: [f64; 2]) -> Self {
        State { u: x[0], v: x[1] }
    }
    /// Membership in the closed first quadrant, with slack `tol`.
    pub fn is_admissible(&self, tol: f64) -> bool {
        self.u >= -tol && self.v >= -tol
    }
    pub fn dist(&self, other: &State) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }
}

/// Coefficients of the kinetics. The canonical model has unit
/// autocatalytic gain; other gains exist only to build negative controls
/// for the verification batteries.
#[derive(Debug, Clone, PartialEq)]
pub struct Kinetics {
    /// Coefficient of `u v²` in the `v` equation.
    pub gain: BigRational,
}

impl Default for Kinetics {
    fn default() -> Self {
        Kinetics { gain: BigRational::one() }
    }
}

impl Kinetics {
    pub fn canonical() -> Self {
        Self::default()
    }

    /// A deliberately corrupted model (gain 17/16).
    pub fn mutated() -> Self {
        Kinetics { gain: BigRational::new(17.into(), 16.into()) }
    }

    pub fn is_canonical(&self) -> bool {
        self.gain.is_one()
    }

    pub fn field<T: Scalar>(&self, u: &T, v: &T, k: &T, f: &T) -> [T; 2] {
        let g = T::from_ratio(&self.gain);
        let uvv = u.clone() * v.clone() * v.clone();
        let one = T::one();
        [
            -uvv.clone() + f.clone() * (one - u.clone()),
            g * uvv - (f.clone() + k.clone()) * v.clone(),
        ]
    }

    pub fn jet<T: Scalar>(&self, u: &T, v: &T, k: &T, f: &T) -> Jet<T> {
        let g = T::from_ratio(&self.gain);
        let two = T::from_i64(2);
        let z = T::zero;
        let uv2 = two.clone() * u.clone() * v.clone();
        let vv = v.clone() * v.clone();
        let jacobian = [
            [-(f.clone() + vv.clone()), -uv2.clone()],
            [g.clone() * vv, g.clone() * uv2 - (f.clone() + k.clone())],
        ];
        // Second derivatives of the cubic term u v²: d_uv = 2v, d_vv = 2u.
        let d_uv = two.clone() * v.clone();
        let d_vv = two.clone() * u.clone();
        let hess_comp = |s: T| -> [[T; 2]; 2] {
            [[z(), s.clone() * d_uv.clone()], [s.clone() * d_uv.clone(), s * d_vv.clone()]]
        };
        let b = [hess_comp(-T::one()), hess_comp(g.clone())];
        // Third derivatives: only d_uvv = 2 (and permutations).
        let third = |s: T| -> [[[T; 2]; 2]; 2] {
            let mut c: [[[T; 2]; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| z())));
            for (i, j, l) in [(0, 1, 1), (1, 0, 1), (1, 1, 0)] {
                c[i][j][l] = s.clone() * two.clone();
            }
            c
        };
        let c = [third(-T::one()), third(g)];
        Jet { value: self.field(u, v, k, f), jacobian, b, c }
    }
}

/// Value and all derivatives of the field at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    pub value: [T; 2],
    /// `jacobian[i][j] = d f_i / d x_j`.
    pub jacobian: [[T; 2]; 2],
    /// `b[i][j][l] = d² f_i / d x_j d x_l`.
    pub b: [[[T; 2]; 2]; 2],
    /// `c[i][j][l][m] = d³ f_i / d x_j d x_l d x_m` (state independent).
    pub c: [[[[T; 2]; 2]; 2]; 2],
}

impl<T: Scalar> Jet<T> {
    pub fn trace(&self) -> T {
        self.jacobian[0][0].clone() + self.jacobian[1][1].clone()
    }

    pub fn det(&self) -> T {
        let a = &self.jacobian;
        a[0][0].clone() * a[1][1].clone() - a[0][1].clone() * a[1][0].clone()
    }

    /// Bilinear form `B(x, y)`.
    pub fn bilinear(&self, x: &[T; 2], y: &[T; 2]) -> [T; 2] {
        std::array::from_fn(|i| {
            let mut s = T::zero();
            for j in 0..2 {
                for l in 0..2 {
                    s = s + self.b[i][j][l].clone() * x[j].clone() * y[l].clone();
                }
            }
            s
        })
    }

    /// Trilinear form `C(x, y, z)`.
    pub fn trilinear(&self, x: &[T; 2], y: &[T; 2], z: &[T; 2]) -> [T; 2] {
        std::array::from_fn(|i| {
            let mut s = T::zero();
            for j in 0..2 {
                for l in 0..2 {
                    for m in 0..2 {
                        s = s + self.c[i][j][l][m].clone() * x[j].clone() * y[l].clone() * z[m].clone();
                    }
                }
            }
            s
        })
    }
}

impl Jet<f64> {
    pub fn jacobian_matrix(&self) -> nalgebra::Matrix2<f64> {
        let a = &self.jacobian;
        nalgebra::Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
    }

    pub fn bilinear_c(&self, x: &[Complex64; 2], y: &[Complex64; 2]) -> [Complex64; 2] {
        std::array::from_fn(|i| {
            let mut s = Complex64::zero();
            for j in 0..2 {
                for l in 0..2 {
                    s += self.b[i][j][l] * x[j] * y[l];
                }
            }
            s
        })
    }

    pub fn trilinear_c(&self, x: &[Complex64; 2], y: &[Complex64; 2], z: &[Complex64; 2]) -> [Complex64; 2] {
        std::array::from_fn(|i| {
            let mut s = Complex64::zero();
            for j in 0..2 {
                for l in 0..2 {
                    for m in 0..2 {
                        s += self.c[i][j][l][m] * x[j] * y[l] * z[m];
                    }
                }
            }
            s
        })
    }
}

/// The canonical vector field.
pub fn vector_field(p: State, a: Params) -> [f64; 2] {
    let uvv = p.u * p.v * p.v;
    [-uvv + a.f * (1.0 - p.u), uvv - (a.f + a.k) * p.v]
}

/// Jet of the canonical field.
pub fn jet(p: State, a: Params) -> Jet<f64> {
    Kinetics::canonical().jet(&p.u, &p.v, &a.k, &a.f)
}

/// Jacobian of the canonical field as a plain array (hot-path helper).
#[inline]
pub fn jacobian(p: State, a: Params) -> [[f64; 2]; 2] {
    let (u, v) = (p.u, p.v);
    [[-(a.f + v * v), -2.0 * u * v], [v * v, 2.0 * u * v - (a.f + a.k)]]
}

/// Exact-rational parameter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactParams {
    pub k: BigRational,
    pub f: BigRational,
}

impl ExactParams {
    pub fn new(k: BigRational, f: BigRational) -> Result<Self> {
        if !(k > BigRational::zero() && f > BigRational::zero()) {
            return Err(Error::Domain(format!("need k > 0 and F > 0, got k={k}, F={f}")));
        }
        Ok(ExactParams { k, f })
    }

    pub fn to_f64(&self) -> Params {
        Params { k: f64::from_ratio(&self.k), f: f64::from_ratio(&self.f) }
    }
}

/// Build a rational `n/d` (panics when `d == 0`).
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_point_is_fixed() {
        let a = Params::new(0.03, 0.01).unwrap();
        assert_eq!(vector_field(State::new(1.0, 0.0), a), [0.0, 0.0]);
    }

    #[test]
    fn direct_evaluation() {
        let r = vector_field(State::new(1.0, 1.0), Params { k: 0.06, f: 0.04 });
        assert!((r[0] + 1.0).abs() < 1e-15 && (r[1] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn exact_bt_jacobian() {
        let jet = Kinetics::canonical().jet(&q(1, 2), &q(1, 4), &q(1, 16), &q(1, 16));
        assert_eq!(jet.value, [q(0, 1), q(0, 1)]);
        assert_eq!(jet.jacobian, [[q(-1, 8), q(-1, 4)], [q(1, 16), q(1, 8)]]);
    }

    #[test]
    fn rejects_nonpositive_params() {
        assert!(Params::new(0.0, 0.1).is_err());
        assert!(Params::new(0.1, -1.0).is_err());
        assert!(Params::new(f64::NAN, 0.1).is_err());
    }
}
