//! `verify-bt` and `verify-bautin`: exact checkpoint verification reports.

use anyhow::Result;
use gskit::bautin::{gh_locate, gh_point_checks, gh_report};
use gskit::bt::{bt_nondegeneracy_with, jordan_basis};
use gskit::model::{q, Kinetics};
use serde_json::{json, Value};

fn model(mutate: bool) -> Kinetics {
    if mutate {
        Kinetics::mutated()
    } else {
        Kinetics::canonical()
    }
}

fn checks_json(checks: &[(String, bool)]) -> Value {
    Value::Array(checks.iter().map(|(n, ok)| json!({ "name": n, "passed": ok })).collect())
}

/// Report and overall verdict of the Bogdanov–Takens verification.
pub fn bt(mutate: bool) -> Result<(Value, bool)> {
    let r = bt_nondegeneracy_with(&model(mutate), &jordan_basis());
    let mut checks: Vec<(String, bool)> = vec![
        ("equilibrium".into(), r.residual.iter().all(|x| *x == q(0, 1))),
        ("double_zero_eigenvalue".into(), r.trace == q(0, 1) && r.det == q(0, 1)),
    ];
    checks.extend(r.basis_checks.iter().map(|(n, ok)| (format!("basis_{n}"), *ok)));
    checks.push(("a20_plus_b11_nonzero".into(), &r.a20 + &r.b11 != q(0, 1)));
    checks.push(("b20_nonzero".into(), r.b20 != q(0, 1)));
    checks.push(("transversality_det".into(), r.transversality_det == q(-1, 512)));
    let passed = checks.iter().all(|c| c.1);
    let report = json!({
        "schema": 1,
        "check": "bogdanov_takens",
        "model": if mutate { "mutated" } else { "gray_scott" },
        "point": { "u": "1/2", "v": "1/4", "k": "1/16", "F": "1/16" },
        "residual": [r.residual[0].to_string(), r.residual[1].to_string()],
        "trace": r.trace.to_string(),
        "det": r.det.to_string(),
        "a20": r.a20.to_string(),
        "b20": r.b20.to_string(),
        "b11": r.b11.to_string(),
        "s": r.s,
        "transversality_matrix": r.matrix.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "transversality_det": r.transversality_det.to_string(),
        "checks": checks_json(&checks),
        "passed": passed,
    });
    Ok((report, passed))
}

/// Report and overall verdict of the Bautin verification.
pub fn bautin(mutate: bool) -> Result<(Value, bool)> {
    let loc = gh_locate()?;
    let gh = gh_report()?;
    let mut checks: Vec<(String, bool)> = vec![("resultant_factorization".into(), loc.factorization_sign.is_some())];
    checks.extend(gh_point_checks(&model(mutate))?.into_iter().map(|(n, ok)| (n.to_string(), ok)));
    checks.push(("l1_sign_change".into(), gh.l1_left_sign == -1 && gh.l1_right_sign == 1));
    checks.push(("l2_positive".into(), gh.l2_sign == 1));
    let passed = checks.iter().all(|c| c.1);
    let report = json!({
        "schema": 1,
        "check": "bautin",
        "model": if mutate { "mutated" } else { "gray_scott" },
        "resultant": loc.resultant.to_string(),
        "resultant_coefficients": loc.resultant.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "resultant_factorization_sign": loc.factorization_sign,
        "eliminant_roots": loc.roots.iter().map(|r| json!({ "y": r.y.to_string(), "multiplicity": r.multiplicity, "note": r.note })).collect::<Vec<_>>(),
        "gh": { "k": gh.gh_params.0, "F": gh.gh_params.1, "u": gh.gh_point.0, "v": gh.gh_point.1 },
        "l1_sign_left": gh.l1_left_sign,
        "l1_sign_right": gh.l1_right_sign,
        "l2": gh.l2,
        "l2_sign": gh.l2_sign,
        "param_map_det": gh.param_map_det,
        "param_map_det_sign": gh.param_map_det_sign,
        "checks": checks_json(&checks),
        "passed": passed,
    });
    Ok((report, passed))
}
