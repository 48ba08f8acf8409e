//! `cycles`, `portrait` and `map`: phase-plane and parameter-plane outputs.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use gskit::dynamics::census::census_report;
use gskit::dynamics::map::{expected_adjacency, region_map, MapSpec, RegionMap};
use gskit::dynamics::{classify_region, compactified_portrait, render_portrait, PortraitSpec};
use gskit::Params;
use serde_json::{json, Value};

pub fn cycles(a: Params) -> Result<Value> {
    let census = census_report(a)?;
    let label = classify_region(a);
    Ok(json!({
        "schema": 1,
        "params": { "k": a.k, "F": a.f },
        "census": census,
        "region": label,
    }))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

/// Writes `portrait.svg`, `portrait.csv` (columns `curve,t,u,v`) and
/// `portrait.json` (cycles, region label and points at infinity).
pub fn portrait(a: Params, spec: &PortraitSpec, out: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let p = render_portrait(a, spec);
    let compact = compactified_portrait(a).ok();
    let meta = json!({
        "schema": 1,
        "params": { "k": a.k, "F": a.f },
        "cycles": p.cycles,
        "region": classify_region(a),
        "infinity": compact,
    });
    Ok(vec![
        write(out, "portrait.svg", &p.svg)?,
        write(out, "portrait.csv", &p.csv)?,
        write(out, "portrait.json", &(serde_json::to_string_pretty(&meta)? + "\n"))?,
    ])
}

pub fn map(spec: &MapSpec) -> RegionMap {
    region_map(spec)
}

/// Adjacency summary compared against the signature table.
pub fn adjacency_json(m: &RegionMap) -> Value {
    let pairs = |s: &std::collections::BTreeSet<(gskit::dynamics::RegionId, gskit::dynamics::RegionId)>| s.iter().map(|(a, b)| [a.name(), b.name()]).collect::<Vec<_>>();
    let found = m.adjacency();
    let expected = expected_adjacency();
    json!({
        "schema": 1,
        "spec": m.spec,
        "regions": m.regions().iter().map(|r| r.name()).collect::<Vec<_>>(),
        "adjacency": pairs(&found),
        "expected_adjacency": pairs(&expected),
        "matches_expected": found == expected,
    })
}
