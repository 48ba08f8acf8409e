//! Parameter-plane region map.
//!
//! Each grid column `k` is split at the bifurcation values found on it:
//! the saddle-node branches and the Hopf value (closed forms), the
//! homoclinic value (splitting bisection) and, where a two-cycle wedge
//! lies below the Hopf curve, the fold of cycles (LPC solve). Every
//! interval between consecutive values is labelled by a full
//! classification at its midpoint; grid cells take the label of the
//! interval containing them. Intervals thinner than a cell still enter the
//! adjacency graph, which records labels of consecutive intervals.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::regions::{classify_region, BoundaryTag, RegionId};
use crate::bautin::l1_kuz;
use crate::continuation::homoclinic::locate_homoclinic;
use crate::continuation::lpc::{lpc_from_pair, wedge_point};
use crate::equilibria::{hopf_f, saddle_node_f};
use crate::model::Params;

/// Grid specification (cell centres span the closed ranges).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapSpec {
    pub k_range: (f64, f64),
    pub f_range: (f64, f64),
    pub nk: usize,
    pub nf: usize,
}

impl MapSpec {
    pub fn k_at(&self, i: usize) -> f64 {
        self.k_range.0 + (self.k_range.1 - self.k_range.0) * (i as f64 + 0.5) / self.nk as f64
    }
    pub fn f_at(&self, j: usize) -> f64 {
        self.f_range.0 + (self.f_range.1 - self.f_range.0) * (j as f64 + 0.5) / self.nf as f64
    }
}

/// A labelled interval of one column, bounded by tagged values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub f_lo: f64,
    pub f_hi: f64,
    pub id: RegionId,
    pub lower: Option<BoundaryTag>,
    pub upper: Option<BoundaryTag>,
}

/// One column of the map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub k: f64,
    pub boundaries: Vec<(f64, BoundaryTag)>,
    pub intervals: Vec<Interval>,
}

impl Column {
    pub fn label_at(&self, f: f64) -> RegionId {
        self.intervals.iter().find(|iv| f >= iv.f_lo && f < iv.f_hi).map(|iv| iv.id).unwrap_or(RegionId::Outside)
    }
}

/// Region map over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub spec: MapSpec,
    pub columns: Vec<Column>,
    /// `labels[i][j]` for column `i`, row `j`.
    pub labels: Vec<Vec<RegionId>>,
}

/// Bifurcation values on the column at `k`.
pub fn column_boundaries(k: f64) -> Vec<(f64, BoundaryTag)> {
    let mut b = Vec::new();
    let Ok((upper, lower)) = saddle_node_f(k) else { return b };
    if upper <= lower {
        return b;
    }
    b.push((lower, BoundaryTag::SN));
    b.push((upper, BoundaryTag::SN));
    let Ok(fh) = hopf_f(k) else { return b };
    let l1 = l1_kuz(Params { k, f: fh }).unwrap_or(0.0);
    b.push((fh, if l1 > 0.0 { BoundaryTag::HPlus } else { BoundaryTag::HMinus }));
    let hom = locate_homoclinic(k, None).ok().map(|p| p.f);
    if let Some(fp) = hom {
        b.push((fp, BoundaryTag::P));
    }
    // A supercritical Hopf below an unstable outer cycle opens the
    // two-cycle wedge bounded by the fold of cycles.
    if l1 < 0.0 && hom.map(|fp| fp > fh).unwrap_or(false) {
        if let Ok(seed) = wedge_point(k) {
            if let Ok(t) = lpc_from_pair(seed) {
                b.push((t.params.f, BoundaryTag::T));
            }
        }
    }
    b.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    b
}

/// Build one column.
pub fn column(k: f64) -> Column {
    let boundaries = column_boundaries(k);
    let mut intervals = Vec::new();
    let mut edges: Vec<(f64, Option<BoundaryTag>)> = vec![(f64::NEG_INFINITY, None)];
    edges.extend(boundaries.iter().map(|&(f, t)| (f, Some(t))));
    edges.push((f64::INFINITY, None));
    for w in edges.windows(2) {
        let (lo, hi) = (w[0].0, w[1].0);
        if hi <= lo {
            continue;
        }
        let id = if !lo.is_finite() || !hi.is_finite() {
            RegionId::Outside
        } else {
            classify_region(Params { k, f: 0.5 * (lo + hi) }).id
        };
        intervals.push(Interval { f_lo: lo, f_hi: hi, id, lower: w[0].1, upper: w[1].1 });
    }
    Column { k, boundaries, intervals }
}

/// Compute the map; columns are processed in parallel on the current
/// rayon pool.
pub fn region_map(spec: &MapSpec) -> RegionMap {
    let columns: Vec<Column> = (0..spec.nk).into_par_iter().map(|i| column(spec.k_at(i))).collect();
    let labels = columns.iter().map(|c| (0..spec.nf).map(|j| c.label_at(spec.f_at(j))).collect()).collect();
    RegionMap { spec: *spec, columns, labels }
}

impl RegionMap {
    /// Unordered pairs of distinct labels that meet across a boundary.
    pub fn adjacency(&self) -> BTreeSet<(RegionId, RegionId)> {
        let mut set = BTreeSet::new();
        for c in &self.columns {
            for w in c.intervals.windows(2) {
                let (a, b) = (w[0].id, w[1].id);
                if a != b {
                    set.insert(if a < b { (a, b) } else { (b, a) });
                }
            }
        }
        set
    }

    /// Labels present anywhere (including sub-cell intervals).
    pub fn regions(&self) -> BTreeSet<RegionId> {
        self.columns.iter().flat_map(|c| c.intervals.iter().map(|i| i.id)).collect()
    }

    /// Grid as CSV with columns `k,F,region`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,F,region\n");
        for (i, row) in self.labels.iter().enumerate() {
            for (j, id) in row.iter().enumerate() {
                s.push_str(&format!("{:.8},{:.8},{}\n", self.spec.k_at(i), self.spec.f_at(j), id.name()));
            }
        }
        s
    }
}

/// The adjacency graph implied by the region signature table: crossing
/// `SN` connects `outside` with regions 1 and 5; `H-` connects 1–4 and
/// 2–3; `H+` connects 2–5; `P` connects 1–2 and 4–5; `T` connects 3–5.
pub fn expected_adjacency() -> BTreeSet<(RegionId, RegionId)> {
    use RegionId::*;
    [(Outside, R1), (Outside, R5), (R1, R4), (R2, R3), (R2, R5), (R1, R2), (R4, R5), (R3, R5)].into_iter().collect()
}
