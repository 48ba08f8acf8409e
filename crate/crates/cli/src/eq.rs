//! `eq`: equilibria and their linear stability, exactly for rational input.

use anyhow::{bail, Result};
use gskit::equilibria::{class_exact, discriminants, discriminants_exact, equilibria, equilibria_exact, stability_at, trace_det_exact, ExactNontrivial};
use gskit::exact::parse_rational;
use gskit::model::{ExactParams, Kinetics};
use gskit::{Params, State};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

/// Exact values are reported as strings (`"p/q"`), floating values as numbers.
fn exact_point(name: &str, p: [BigRational; 2], a: &ExactParams) -> Value {
    let (trace, det) = trace_det_exact(&p, a, &Kinetics::canonical());
    let class = class_exact(&trace, &det);
    let disc = &trace * &trace - BigRational::from_integer(4.into()) * &det;
    json!({
        "name": name,
        "u": p[0].to_string(),
        "v": p[1].to_string(),
        "trace": trace.to_string(),
        "det": det.to_string(),
        "disc": disc.to_string(),
        "class": class,
    })
}

fn float_point(name: &str, p: State, a: Params, tol: f64) -> Value {
    json!({ "name": name, "u": p.u, "v": p.v, "stability": stability_at(p, a, tol) })
}

/// True when both inputs are rational literals (`p/q` or integers).
pub fn is_exact_input(k: &str, f: &str) -> bool {
    let exact = |s: &str| !s.contains(['.', 'e', 'E']) && parse_rational(s).is_some();
    exact(k) && exact(f)
}

pub fn run(k: &str, f: &str, tol: f64) -> Result<Value> {
    if is_exact_input(k, f) {
        let a = ExactParams::new(parse_rational(k).unwrap(), parse_rational(f).unwrap())?;
        let d = discriminants_exact(&a);
        let mut points = vec![exact_point("p0", [BigRational::one(), BigRational::zero()], &a)];
        let nontrivial = equilibria_exact(&a);
        match nontrivial.clone() {
            ExactNontrivial::None => {}
            ExactNontrivial::Degenerate(p) => points.push(exact_point("p_degenerate", p, &a)),
            ExactNontrivial::Pair { p_mp, p_pm } => {
                points.push(exact_point("p_mp", p_mp, &a));
                points.push(exact_point("p_pm", p_pm, &a));
            }
            ExactNontrivial::Irrational => {
                // sqrt(Delta) is irrational: report the pair in floating point.
                let af = a.to_f64();
                let set = equilibria(af);
                for (name, p) in [("p_mp", set.p_mp()), ("p_pm", set.p_pm())] {
                    if let Some(p) = p {
                        points.push(float_point(name, p, af, tol));
                    }
                }
            }
        }
        let mode = if matches!(nontrivial, ExactNontrivial::Irrational) { "exact_parameters_irrational_roots" } else { "exact" };
        Ok(json!({
            "schema": 1,
            "mode": mode,
            "params": { "k": a.k.to_string(), "F": a.f.to_string() },
            "gamma": d.gamma.to_string(),
            "Delta": d.delta.to_string(),
            "Delta_approx": d.delta.to_f64(),
            "equilibria": points,
        }))
    } else {
        let (Ok(kv), Ok(fv)) = (k.parse::<f64>(), f.parse::<f64>()) else {
            bail!("cannot parse parameters k='{k}', F='{f}'");
        };
        let a = Params::new(kv, fv)?;
        let set = equilibria(a);
        let d = discriminants(a);
        let mut points = vec![float_point("p0", set.p0, a, tol)];
        match set.nontrivial {
            gskit::equilibria::Nontrivial::Degenerate { point } => points.push(float_point("p_degenerate", point, a, tol)),
            _ => {
                for (name, p) in [("p_mp", set.p_mp()), ("p_pm", set.p_pm())] {
                    if let Some(p) = p {
                        points.push(float_point(name, p, a, tol));
                    }
                }
            }
        }
        Ok(json!({
            "schema": 1,
            "mode": "float",
            "params": { "k": kv, "F": fv },
            "gamma": d.gamma,
            "Delta": d.delta,
            "equilibria": points,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_rationals_to_exact_mode() {
        assert!(is_exact_input("1/16", "1/16"));
        assert!(is_exact_input("1", "3/256"));
        assert!(!is_exact_input("0.07", "1/16"));
        assert!(!is_exact_input("1e-2", "1/16"));
    }
}
