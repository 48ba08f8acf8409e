//! Saddle separatrices, their splitting on the section ray, and the
//! homoclinic curve obtained by bracketing sign changes of the splitting.
//!
//! Both separatrices of `p_pm` are taken on the branch pointing towards
//! `p_mp`: the unstable one is integrated forward, the stable one backward,
//! each to its first crossing of the positive section ray. The splitting is
//! `gap = s_U - s_S`; a homoclinic orbit is a zero.

use serde::Serialize;

use super::cycles::{ray_crossing, ReturnOptions, Section};
use crate::equilibria::{hopf_f, saddle_node_f};
use crate::error::{Error, Result};
use crate::model::{jacobian, Params, State};

/// Launch distance from the saddle.
pub const LAUNCH_EPS: f64 = 1e-7;
/// Largest accepted change of the splitting when the launch distance is halved.
pub const RICHARDSON_TOL: f64 = 1e-6;
/// Width to which homoclinic parameters are bracketed.
pub const HOMOCLINIC_BRACKET: f64 = 1e-8;

/// Splitting data at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Splitting {
    pub gap: f64,
    pub s_unstable: f64,
    pub s_stable: f64,
    pub eps: f64,
    /// Splitting recomputed at `eps / 2`.
    pub gap_half_eps: f64,
}

impl Splitting {
    pub fn richardson_ok(&self) -> bool {
        (self.gap - self.gap_half_eps).abs() < RICHARDSON_TOL
    }
}

/// Unit eigenvectors `(unstable, stable)` of the saddle, both oriented
/// towards `p_mp`.
pub fn saddle_directions(sec: &Section, a: Params) -> Result<([f64; 2], [f64; 2])> {
    let p = sec.saddle;
    let j = jacobian(p, a);
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det >= 0.0 {
        return Err(Error::SaddleMissing);
    }
    let root = (0.25 * tr * tr - det).sqrt();
    let towards = [sec.origin.u - p.u, sec.origin.v - p.v];
    let vec_for = |lambda: f64| {
        let mut e = [j[0][1], lambda - j[0][0]];
        if e[0].hypot(e[1]) < 1e-14 {
            e = [lambda - j[1][1], j[1][0]];
        }
        let n = e[0].hypot(e[1]);
        let mut e = [e[0] / n, e[1] / n];
        if e[0] * towards[0] + e[1] * towards[1] < 0.0 {
            e = [-e[0], -e[1]];
        }
        e
    };
    Ok((vec_for(0.5 * tr + root), vec_for(0.5 * tr - root)))
}

/// Ray coordinates `(s_U, s_S)` of the first crossings of the separatrices.
pub fn separatrix_crossings(a: Params, eps: f64) -> Result<(f64, f64)> {
    let sec = Section::at(a)?;
    crossings_on(&sec, a, eps)
}

fn crossings_on(sec: &Section, a: Params, eps: f64) -> Result<(f64, f64)> {
    let (eu, es) = saddle_directions(sec, a)?;
    let p = sec.saddle;
    let opts = ReturnOptions::precise();
    let su = ray_crossing(a, sec, State::new(p.u + eps * eu[0], p.v + eps * eu[1]), 1.0, &opts).map_err(|_| Error::SectionMiss)?;
    let ss = ray_crossing(a, sec, State::new(p.u + eps * es[0], p.v + eps * es[1]), -1.0, &opts).map_err(|_| Error::SectionMiss)?;
    Ok((su, ss))
}

/// The stable separatrix crossing alone (the outer edge of the basin
/// scanned by the cycle census).
pub fn stable_crossing(sec: &Section, a: Params) -> Result<f64> {
    let (_, es) = saddle_directions(sec, a)?;
    let p = sec.saddle;
    ray_crossing(a, sec, State::new(p.u + LAUNCH_EPS * es[0], p.v + LAUNCH_EPS * es[1]), -1.0, &ReturnOptions::precise()).map_err(|_| Error::SectionMiss)
}

/// Splitting `s_U - s_S` at the default launch distance.
pub fn separatrix_splitting(a: Params) -> Result<f64> {
    let (su, ss) = separatrix_crossings(a, LAUNCH_EPS)?;
    Ok(su - ss)
}

/// Splitting with a launch-distance halving check.
pub fn splitting_report(a: Params, eps: f64) -> Result<Splitting> {
    let sec = Section::at(a)?;
    let (su, ss) = crossings_on(&sec, a, eps)?;
    let (su2, ss2) = crossings_on(&sec, a, 0.5 * eps)?;
    Ok(Splitting { gap: su - ss, s_unstable: su, s_stable: ss, eps, gap_half_eps: su2 - ss2 })
}

/// A bracketed point of the homoclinic curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomoclinicPoint {
    pub k: f64,
    pub f: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub gap_lo: f64,
    pub gap_hi: f64,
}

impl HomoclinicPoint {
    pub fn params(&self) -> Params {
        Params { k: self.k, f: self.f }
    }
    pub fn bracket(&self) -> f64 {
        self.f_hi - self.f_lo
    }
}

/// Default search window in `F` at abscissa `k`.
fn window(k: f64) -> Result<(f64, f64)> {
    let (upper, lower) = saddle_node_f(k)?;
    let lo = lower * (1.0 + 1e-9) + 1e-12;
    let hi = match hopf_f(k) {
        Ok(h) => (h + 1.5 * (h - lower)).min(upper),
        Err(_) => upper,
    };
    Ok((lo, hi))
}

/// Bisect a sign change of the splitting at fixed `k` down to `width`.
pub fn bisect_homoclinic(k: f64, mut lo: f64, mut hi: f64, mut glo: f64, mut ghi: f64, width: f64) -> Result<HomoclinicPoint> {
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let gm = separatrix_splitting(Params { k, f: mid })?;
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    Ok(HomoclinicPoint { k, f: 0.5 * (lo + hi), f_lo: lo, f_hi: hi, gap_lo: glo, gap_hi: ghi })
}

/// Locate the homoclinic parameter at abscissa `k`. With a predictor the
/// search expands geometrically around it; otherwise the default window
/// is scanned uniformly and, more densely, around the Hopf value.
pub fn locate_homoclinic(k: f64, predictor: Option<f64>) -> Result<HomoclinicPoint> {
    let (wlo, whi) = window(k)?;
    let mut samples: Vec<f64> = match predictor {
        Some(p) => {
            let mut v = vec![p];
            let mut w = 2e-6;
            for _ in 0..12 {
                v.push(p - w);
                v.push(p + w);
                w *= 1.6;
            }
            v.into_iter().filter(|f| *f > wlo && *f < whi).collect()
        }
        None => {
            // Uniform scan plus samples clustering geometrically on the
            // Hopf value: at small k the splitting is only defined in a
            // thin band next to it.
            let mut v: Vec<f64> = (0..=40).map(|i| wlo + (whi - wlo) * i as f64 / 40.0).collect();
            if let Ok(h) = hopf_f(k) {
                for n in 1..=40 {
                    let d = (h - wlo) * 0.5f64.powf(0.5 * n as f64);
                    v.extend([h - d, h + d]);
                }
            }
            v.into_iter().filter(|f| *f > wlo && *f < whi).collect()
        }
    };
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let vals: Vec<(f64, f64)> = samples.iter().filter_map(|&f| separatrix_splitting(Params { k, f }).ok().map(|g| (f, g))).collect();
    let centre = predictor.unwrap_or(0.5 * (wlo + whi));
    let best = vals
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .min_by(|x, y| {
            let dx = (0.5 * (x[0].0 + x[1].0) - centre).abs();
            let dy = (0.5 * (y[0].0 + y[1].0) - centre).abs();
            dx.partial_cmp(&dy).unwrap()
        })
        .ok_or(Error::BracketNotFound)?;
    bisect_homoclinic(k, best[0].0, best[1].0, best[0].1, best[1].1, HOMOCLINIC_BRACKET)
}

/// Homoclinic points at the given abscissae, each search predicted from
/// the previous results. Stops at the first abscissa where no bracket is
/// found, returning the points obtained so far.
pub fn homoclinic_curve(ks: &[f64]) -> (Vec<HomoclinicPoint>, Option<Error>) {
    let mut out: Vec<HomoclinicPoint> = Vec::new();
    for &k in ks {
        let predictor = match out.len() {
            0 => None,
            1 => Some(out[0].f),
            n => {
                let (a, b) = (&out[n - 2], &out[n - 1]);
                Some(b.f + (b.f - a.f) / (b.k - a.k) * (k - b.k))
            }
        };
        match locate_homoclinic(k, predictor).or_else(|e| if predictor.is_some() { locate_homoclinic(k, None) } else { Err(e) }) {
            Ok(p) => out.push(p),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// Log–log slope fit of the homoclinic curve approaching the BT point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangencyFit {
    /// Slope of `log|k_sn(F) - k|` against `log|F - F_bt|`, measuring the
    /// order of contact with the saddle-node curve.
    pub contact_order: f64,
    /// Slope of `log|F - F_sn(k)|` against `log|k - k_bt|`.
    pub literal_slope: f64,
}

/// Least-squares slope.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fit the approach of homoclinic points to the BT point `(1/16, 1/16)`.
pub fn tangency_exponent(points: &[HomoclinicPoint]) -> TangencyFit {
    let bt = 0.0625;
    let ksn = |f: f64| f.sqrt() / 2.0 - f;
    let (mut x1, mut y1, mut x2, mut y2) = (vec![], vec![], vec![], vec![]);
    for p in points {
        x1.push((p.f - bt).abs().ln());
        y1.push((ksn(p.f) - p.k).abs().ln());
        x2.push((p.k - bt).abs().ln());
        let (up, lo) = saddle_node_f(p.k).unwrap_or((f64::NAN, f64::NAN));
        let d = (p.f - up).abs().min((p.f - lo).abs());
        y2.push(d.ln());
    }
    TangencyFit { contact_order: slope(&x1, &y1), literal_slope: slope(&x2, &y2) }
}
