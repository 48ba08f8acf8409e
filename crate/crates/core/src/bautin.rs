//! Hopf-curve analysis and the generalized Hopf (Bautin) point.
//!
//! Three independent routes to the first Lyapunov coefficient are provided:
//! the Chow–Li–Wang closed form, the invariant Kuznetsov expression, and the
//! normal-form reduction of [`crate::normal_form`] (which also yields ℓ2 and
//! ℓ1 off the Hopf curve). Exact localization of the Bautin point goes
//! through a bivariate resultant over the integers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::equilibria::{bisect, equilibria_exact, equilibrium_pair, hopf_f, ExactNontrivial};
use crate::error::{Error, Result};
use crate::exact::sqrt_exact;
use crate::model::{jet, q, ExactParams, Jet, Kinetics, Params, State};
use crate::normal_form::{pairing, resonant_coefficients, EigenFrame};
use crate::poly::{rational_roots, resultant, Poly};

/// Tolerance on the trace for "on the Hopf curve".
pub const HOPF_TRACE_TOL: f64 = 1e-10;

/// The Bautin point `(k, F) = (9/256, 3/256)` in floating point.
pub const GH: Params = Params { k: 9.0 / 256.0, f: 3.0 / 256.0 };

/// A point of the Hopf curve of `p_mp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfFrame {
    pub params: Params,
    pub point: State,
    /// `sqrt(det Df(p_mp))`.
    pub omega0: f64,
    /// Offset from the Hopf curve along `F` (zero on the curve).
    pub nu: f64,
}

/// Validate that `a` lies on the Hopf curve and return the frame.
pub fn hopf_frame(a: Params) -> Result<HopfFrame> {
    let (p, _) = equilibrium_pair(a).ok_or(Error::NotOnHopfCurve { trace: f64::NAN, det: f64::NAN })?;
    let j = jet(p, a);
    let (trace, det) = (j.trace(), j.det());
    if !(trace.abs() < HOPF_TRACE_TOL && det > 0.0) {
        return Err(Error::NotOnHopfCurve { trace, det });
    }
    Ok(HopfFrame { params: a, point: p, omega0: det.sqrt(), nu: hopf_nu(a.k, a.f).unwrap_or(f64::NAN) })
}

/// `F(k, ν) = ν - (√k/2)(-1 + √(1-4√k) + 2√k)`; `ν = 0` is the Hopf curve.
pub fn hopf_offset_f(k: f64, nu: f64) -> Result<f64> {
    if !(k > 0.0 && k <= 1.0 / 16.0) {
        return Err(Error::Domain(format!("k must lie in (0, 1/16], got {k}")));
    }
    let s = k.sqrt();
    Ok(nu - 0.5 * s * (-1.0 + (1.0 - 4.0 * s).max(0.0).sqrt() + 2.0 * s))
}

/// Inverse of [`hopf_offset_f`].
pub fn hopf_nu(k: f64, f: f64) -> Result<f64> {
    Ok(f - hopf_offset_f(k, 0.0)?)
}

/// Chow–Li–Wang expression for ℓ1 (transcription-corrected bracket).
///
/// With `A = [[a, b], [c, d]]`, `β0² = det A` and `f`, `g` the two field
/// components, the value is `b/(16 β0⁴) { … }`. It agrees with
/// [`l1_kuz`] up to the positive factor `4ω/|(b, iω - a)|²`.
pub fn l1_clw(a: Params) -> Result<f64> {
    let fr = hopf_frame(a)?;
    let j = jet(fr.point, a);
    Ok(l1_clw_from_jet(&j))
}

fn l1_clw_from_jet(j: &Jet<f64>) -> f64 {
    let [[_, b], [c, d]] = j.jacobian;
    let b0s = j.det();
    let (fxx, fxy, fyy) = (j.b[0][0][0], j.b[0][0][1], j.b[0][1][1]);
    let (gxx, gxy, gyy) = (j.b[1][0][0], j.b[1][0][1], j.b[1][1][1]);
    // t(i, n): third derivative of component i with n of its three derivatives in y.
    let t = |i: usize, n: usize| j.c[i][usize::from(n >= 3)][usize::from(n >= 2)][usize::from(n >= 1)];
    let (fxxx, fxxy, fxyy) = (t(0, 0), t(0, 1), t(0, 2));
    let (gxxy, gxyy, gyyy) = (t(1, 1), t(1, 2), t(1, 3));
    let bracket = b0s * (b * (fxxx + gxxy) + 2.0 * d * (fxxy + gxyy) - c * (fxyy + gyyy))
        - b * d * (fxx * fxx - fxx * gxy - fxy * gxx - gxx * gyy - 2.0 * gxy * gxy)
        - c * d * (gyy * gyy - gyy * fxy - gxy * fyy - fyy * fxx - 2.0 * fxy * fxy)
        + b * b * (fxx * gxx + gxx * gxy)
        - c * c * (fyy * gyy + fxy * fyy)
        - (b0s + 3.0 * d * d) * (fxx * fxy - gxy * gyy);
    b / (16.0 * b0s * b0s) * bracket
}

/// Solve `M x = r` for a complex 2×2 matrix.
fn solve2(m: [[Complex64; 2]; 2], r: [Complex64; 2]) -> [Complex64; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [(r[0] * m[1][1] - m[0][1] * r[1]) / det, (m[0][0] * r[1] - m[1][0] * r[0]) / det]
}

/// First Lyapunov coefficient on the Hopf curve by the invariant formula
///
/// ```text
///   ℓ1 = Re[<p, C(q,q,q̄)> - 2<p, B(q, A⁻¹B(q,q̄))> + <p, B(q̄, (2iω - A)⁻¹B(q,q))>] / (2ω)
/// ```
///
/// with `|q| = 1` and `<p, q> = 1`.
pub fn l1_kuz(a: Params) -> Result<f64> {
    let fr = hopf_frame(a)?;
    l1_kuz_at(fr.point, a)
}

/// The same invariant expression evaluated at an arbitrary equilibrium
/// `p` with complex spectrum (the trace term is ignored). Used as a test
/// function along continued Hopf curves.
pub fn l1_kuz_at(p: State, a: Params) -> Result<f64> {
    let j = jet(p, a);
    let e = EigenFrame::new(&j.jacobian).ok_or(Error::NotOnHopfCurve { trace: j.trace(), det: j.det() })?;
    let w = e.omega();
    let (q, p) = (e.q, e.p);
    let qb = [q[0].conj(), q[1].conj()];
    let am = j.jacobian;
    let cm = |x: f64| Complex64::new(x, 0.0);
    let neg_a = [[cm(-am[0][0]), cm(-am[0][1])], [cm(-am[1][0]), cm(-am[1][1])]];
    // A⁻¹ y = -((-A)⁻¹ y)
    let ainv_b = solve2(neg_a, j.bilinear_c(&q, &qb)).map(|z| -z);
    let shifted = [[Complex64::new(0.0, 2.0 * w) - am[0][0], cm(-am[0][1])], [cm(-am[1][0]), Complex64::new(0.0, 2.0 * w) - am[1][1]]];
    let r2 = solve2(shifted, j.bilinear_c(&q, &q));
    let total = pairing(&p, &j.trilinear_c(&q, &q, &qb)) - 2.0 * pairing(&p, &j.bilinear_c(&q, &ainv_b)) + pairing(&p, &j.bilinear_c(&qb, &r2));
    Ok(total.re / (2.0 * w))
}

/// Normal-form coefficients at `p_mp` for any parameters where `p_mp` is a
/// focus: returns `(λ, c1, c2)`.
pub fn normal_form_at(a: Params) -> Result<(Complex64, Complex64, Complex64)> {
    let (p, _) = equilibrium_pair(a).ok_or_else(|| Error::Domain("p_mp does not exist".into()))?;
    let j = jet(p, a);
    let e = EigenFrame::new(&j.jacobian).ok_or_else(|| Error::Domain("p_mp is not a focus".into()))?;
    let (c1, c2) = resonant_coefficients(&j, &e);
    Ok((e.lambda, c1, c2))
}

/// ℓ1 = Re c1 / ω, defined wherever `p_mp` is a focus.
pub fn first_lyapunov(a: Params) -> Result<f64> {
    let (l, c1, _) = normal_form_at(a)?;
    Ok(c1.re / l.im)
}

/// Second Lyapunov coefficient `Re c2 / ω` on the Hopf curve, under the
/// same normalization as [`l1_kuz`]. It is an invariant where ℓ1 = 0.
pub fn l2_kuz(a: Params) -> Result<f64> {
    let fr = hopf_frame(a)?;
    let (_, _, c2) = normal_form_at(a)?;
    Ok(c2.re / fr.omega0)
}

/// Point of the Hopf curve at abscissa `k`.
pub fn hopf_point(k: f64) -> Result<Params> {
    Ok(Params { k, f: hopf_f(k)? })
}

/// Numerical Bautin point: the zero of ℓ1 along the Hopf curve in `[lo, hi]`.
pub fn locate_gh_numeric(lo: f64, hi: f64) -> Result<Params> {
    let g = |k: f64| hopf_point(k).and_then(l1_kuz).unwrap_or(f64::NAN);
    let (gl, gh) = (g(lo), g(hi));
    if !(gl * gh < 0.0) {
        return Err(Error::BracketNotFound);
    }
    let k = bisect(g, lo, hi, 1e-15);
    hopf_point(k)
}

/// `μ = tr Df(p_mp) / 2`, the real part of the critical pair.
pub fn mu(a: Params) -> Result<f64> {
    let (p, _) = equilibrium_pair(a).ok_or_else(|| Error::Domain("p_mp does not exist".into()))?;
    Ok(jet(p, a).trace() / 2.0)
}

/// Determinant of the Jacobian of `(k, F) ↦ (μ, ℓ1)` by central differences
/// with step `h`.
pub fn param_map_determinant(gh: Params, h: f64) -> Result<f64> {
    let eval = |k: f64, f: f64| -> Result<(f64, f64)> {
        let a = Params { k, f };
        Ok((mu(a)?, first_lyapunov(a)?))
    };
    let (mk_p, lk_p) = eval(gh.k + h, gh.f)?;
    let (mk_m, lk_m) = eval(gh.k - h, gh.f)?;
    let (mf_p, lf_p) = eval(gh.k, gh.f + h)?;
    let (mf_m, lf_m) = eval(gh.k, gh.f - h)?;
    let (dmu_dk, dmu_df) = ((mk_p - mk_m) / (2.0 * h), (mf_p - mf_m) / (2.0 * h));
    let (dl_dk, dl_df) = ((lk_p - lk_m) / (2.0 * h), (lf_p - lf_m) / (2.0 * h));
    Ok(dmu_dk * dl_df - dmu_df * dl_dk)
}

/// Transversality of the parameter map at the Bautin point (default step 1e-6).
pub fn param_map_transversality(gh: Params) -> Result<f64> {
    if (gh.k - GH.k).abs() > 1e-8 || (gh.f - GH.f).abs() > 1e-8 {
        return Err(Error::Domain("expected a point within 1e-8 of (9/256, 3/256)".into()));
    }
    param_map_determinant(gh, 1e-6)
}

/// The printed pair `Q1(x, y)`, `Q2(x, y)` with `x = √k`, `y = √(1-4√k)`,
/// as polynomials in `x` with coefficients in `Z[y]`.
pub fn printed_system() -> (Poly<Poly<BigInt>>, Poly<Poly<BigInt>>) {
    let lin = |c0: i64, c1: i64| Poly::from_i64(&[c0, c1]);
    // Coefficients of x^0 .. x^8, each linear in y: (constant, y-coefficient).
    let q1 = Poly::new(vec![
        lin(-3, 3),
        lin(52, -46),
        lin(-372, 286),
        lin(1416, -924),
        lin(-3080, 1650),
        lin(3816, -1596),
        lin(-2520, 756),
        lin(752, -136),
        lin(-66, 4),
    ]);
    let q2 = Poly::new(vec![Poly::from_i64(&[1, 0, -1]), Poly::from_i64(&[-4])]);
    (q1, q2)
}

/// Evaluate `Q1` at rational `(x, y)`.
pub fn q1_exact(x: &BigRational, y: &BigRational) -> BigRational {
    let (q1, _) = printed_system();
    q1.coeffs()
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c.eval_rational(y))
}

/// The printed restricted ℓ1 polynomial in radical form, at `k`.
pub fn printed_l1_polynomial(k: f64) -> f64 {
    let x = k.sqrt();
    let y = (1.0 - 4.0 * x).sqrt();
    let (q1, _) = printed_system();
    q1.coeffs().iter().rev().fold(0.0, |acc, c| {
        let cy: f64 = c.coeffs().iter().rev().fold(0.0, |a, b| a * y + b.to_string().parse::<f64>().unwrap());
        acc * x + cy
    })
}

/// Sign of the constant relating the printed polynomial to ℓ1, determined
/// once at `k = 0.02`.
pub fn printed_factor_sign() -> Result<f64> {
    let k = 0.02;
    Ok((printed_l1_polynomial(k) / l1_clw(hopf_point(k)?)?).signum())
}

/// One rational root of the eliminant and what it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminantRoot {
    pub y: BigRational,
    pub multiplicity: usize,
    /// `(k, F)` when the root maps to an interior Hopf point.
    pub params: Option<(BigRational, BigRational)>,
    pub note: String,
}

/// Exact localization data of the Bautin point.
#[derive(Debug, Clone, PartialEq)]
pub struct GhLocation {
    pub resultant: Poly<BigInt>,
    /// `resultant == sign * 2 (y-1)^16 (2y-1)` coefficient by coefficient.
    pub factorization_sign: Option<i32>,
    pub roots: Vec<EliminantRoot>,
    pub k: BigRational,
    pub f: BigRational,
    pub p_mp: [BigRational; 2],
}

/// `2 (y - 1)^16 (2y - 1)`.
pub fn expected_eliminant() -> Poly<BigInt> {
    Poly::from_i64(&[-1, 1]).pow(16) * Poly::from_i64(&[-1, 2]) * Poly::from_i64(&[2])
}

/// Eliminate `x` from the printed system, extract rational roots and map
/// them back to parameters.
pub fn gh_locate() -> Result<GhLocation> {
    let (q1, q2) = printed_system();
    let res = resultant(&q1, &q2)?;
    let expected = expected_eliminant();
    let factorization_sign = if res == expected {
        Some(1)
    } else if res == -expected.clone() {
        Some(-1)
    } else {
        None
    };
    let mut roots = Vec::new();
    let mut found = None;
    for (y, multiplicity) in rational_roots(&res)? {
        let (params, note) = map_root(&y);
        if let Some(p) = &params {
            found.get_or_insert(p.clone());
        }
        roots.push(EliminantRoot { y, multiplicity, params, note });
    }
    let (k, f) = found.ok_or(Error::BracketNotFound)?;
    let p_mp = match equilibria_exact(&ExactParams::new(k.clone(), f.clone())?) {
        ExactNontrivial::Pair { p_mp, .. } => p_mp,
        _ => return Err(Error::Domain("no exact p_mp at the located point".into())),
    };
    Ok(GhLocation { resultant: res, factorization_sign, roots, k, f, p_mp })
}

/// Back-substitution `y = √(1-4x)`, `x = √k`, `F` from the Hopf curve.
fn map_root(y: &BigRational) -> (Option<(BigRational, BigRational)>, String) {
    if y.is_negative() {
        return (None, "y < 0 is not a square root".into());
    }
    let x = (BigRational::one() - y * y) / BigRational::from_integer(4.into());
    if !x.is_positive() {
        return (None, format!("maps to sqrt(k) = {x}: degenerate boundary k = 0"));
    }
    let k = &x * &x;
    // On the Hopf curve F = (√k - 2k - √k·y)/2.
    let f = (&x - BigRational::from_integer(2.into()) * &k - &x * y) / BigRational::from_integer(2.into());
    if !f.is_positive() {
        return (None, format!("maps to k = {k} with F = {f} <= 0"));
    }
    debug_assert!(sqrt_exact(&k).is_some());
    (Some((k.clone(), f.clone())), format!("maps to (k, F) = ({k}, {f})"))
}

/// Sign of a float as −1, 0 or +1.
pub fn sign(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Summary of the Bautin verification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhReport {
    pub gh_params: (String, String),
    pub gh_point: (String, String),
    pub l1_left_sign: i32,
    pub l1_right_sign: i32,
    pub l2_sign: i32,
    pub param_map_det_sign: i32,
    pub l2: f64,
    pub param_map_det: f64,
}

/// Signs of ℓ1 on both sides of the Bautin point, ℓ2 and the parameter map.
pub fn gh_report() -> Result<GhReport> {
    let loc = gh_locate()?;
    let l1_left = l1_kuz(hopf_point(GH.k - 1e-3)?)?;
    let l1_right = l1_kuz(hopf_point(GH.k + 1e-3)?)?;
    let l2 = l2_kuz(hopf_point(GH.k)?)?;
    let det = param_map_transversality(GH)?;
    Ok(GhReport {
        gh_params: (loc.k.to_string(), loc.f.to_string()),
        gh_point: (loc.p_mp[0].to_string(), loc.p_mp[1].to_string()),
        l1_left_sign: sign(l1_left),
        l1_right_sign: sign(l1_right),
        l2_sign: sign(l2),
        param_map_det_sign: sign(det),
        l2,
        param_map_det: det,
    })
}

/// Exact checks of the located Bautin point under a given kinetics: the
/// point is an equilibrium with zero trace and positive determinant.
pub fn gh_point_checks(model: &Kinetics) -> Result<Vec<(&'static str, bool)>> {
    let loc = gh_locate()?;
    let jet = model.jet(&loc.p_mp[0], &loc.p_mp[1], &loc.k, &loc.f);
    Ok(vec![
        ("gh_params", loc.k == q(9, 256) && loc.f == q(3, 256)),
        ("gh_point", loc.p_mp == [q(1, 4), q(3, 16)]),
        ("equilibrium", jet.value.iter().all(|v| v.is_zero())),
        ("zero_trace", jet.trace().is_zero()),
        ("positive_det", jet.det().is_positive()),
    ])
}

/// Stability of a cycle of the polar normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleStability {
    Stable,
    Unstable,
    SemiStable,
}

/// Cycles of `ρ' = ρ(β1 + β2 ρ² + ρ⁴)`: positive roots of the biquadratic,
/// ordered by radius, with stability from `d/dρ[ρ(β1 + β2ρ² + ρ⁴)]`.
pub fn bautin_polar_census(beta1: f64, beta2: f64) -> Vec<(f64, CycleStability)> {
    let disc = beta2 * beta2 - 4.0 * beta1;
    let mut r2: Vec<f64> = if disc > 0.0 {
        let s = disc.sqrt();
        vec![(-beta2 - s) / 2.0, (-beta2 + s) / 2.0]
    } else if disc == 0.0 {
        vec![-beta2 / 2.0]
    } else {
        vec![]
    };
    r2.retain(|&x| x > 0.0);
    r2.into_iter()
        .map(|x| {
            let slope = beta1 + 3.0 * beta2 * x + 5.0 * x * x;
            let st = if disc == 0.0 {
                CycleStability::SemiStable
            } else if slope < 0.0 {
                CycleStability::Stable
            } else {
                CycleStability::Unstable
            };
            (x.sqrt(), st)
        })
        .collect()
}

/// The Bautin point as exact parameters.
pub fn gh_exact() -> ExactParams {
    ExactParams { k: q(9, 256), f: q(3, 256) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_is_affine() {
        assert!((hopf_offset_f(9.0 / 256.0, 0.0).unwrap() - 3.0 / 256.0).abs() < 1e-16);
        assert_eq!(hopf_offset_f(1.0 / 16.0, 0.0).unwrap(), 1.0 / 16.0);
        let k = 0.03;
        let d = hopf_offset_f(k, 1e-3).unwrap() - hopf_offset_f(k, 0.0).unwrap();
        assert!((d - 1e-3).abs() < 1e-16);
    }

    #[test]
    fn off_curve_is_rejected() {
        assert!(matches!(l1_clw(Params { k: 0.03, f: 0.02 }), Err(Error::NotOnHopfCurve { .. })));
    }

    #[test]
    fn printed_q1_vanishes_at_gh() {
        assert!(q1_exact(&q(3, 16), &q(1, 2)).is_zero());
    }

    #[test]
    fn polar_census_examples() {
        let c = bautin_polar_census(3.0, -4.0);
        assert_eq!(c.len(), 2);
        assert!((c[0].0 - 1.0).abs() < 1e-15 && c[0].1 == CycleStability::Stable);
        assert!((c[1].0 - 3f64.sqrt()).abs() < 1e-15 && c[1].1 == CycleStability::Unstable);
        assert!(bautin_polar_census(1.0, 1.0).is_empty());
        let t = bautin_polar_census(4.0, -4.0);
        assert_eq!(t.len(), 1);
        assert!((t[0].0 - 2f64.sqrt()).abs() < 1e-15 && t[0].1 == CycleStability::SemiStable);
    }

    #[test]
    fn kuznetsov_matches_normal_form() {
        for k in [0.01, 0.03, 0.05] {
            let a = hopf_point(k).unwrap();
            let l1 = l1_kuz(a).unwrap();
            let nf = first_lyapunov(a).unwrap();
            assert!((l1 - nf).abs() < 1e-9 * l1.abs().max(1.0), "{l1} vs {nf}");
        }
    }
}
