//! Parameter-region labels from dynamical signatures.
//!
//! Region signature table (`p_mp` stability, cycles listed from the inside
//! out, splitting sign `s_U - s_S`):
//!
//! | id        | equilibria   | `p_mp`   | cycles                    | splitting |
//! |-----------|--------------|----------|---------------------------|-----------|
//! | `outside` | `p0` only    | —        | —                         | —         |
//! | `1`       | `p0, p_mp, p_pm` | stable   | none                  | `< 0`     |
//! | `2`       | three        | stable   | one unstable              | `> 0`     |
//! | `3`       | three        | unstable | stable inside unstable    | `> 0`     |
//! | `4`       | three        | unstable | one stable                | `< 0`     |
//! | `5`       | three        | unstable | none                      | `> 0`     |
//!
//! The splitting sign equals the stability of the outermost invariant set
//! around `p_mp` as seen from outside (positive: repelling), so it is a
//! consistency check rather than an independent input; it is undefined when
//! a separatrix misses the section. Boundaries: `SN` (Δ = 0), `H+` / `H-`
//! (Hopf with ℓ1 > 0 / ℓ1 < 0), `T` (a cycle with multiplier 1), `P`
//! (homoclinic loop, zero splitting).

use std::fmt;

use serde::{Serialize, Serializer};

use super::census::census_report;
use crate::bautin::l1_kuz_at;
use crate::equilibria::{discriminants, equilibrium_pair, hopf_f, stability_at, EquilibriumClass, NONHYPERBOLIC_TOL};
use crate::model::Params;

/// Tolerance for boundary tags on closed-form curves.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Multiplier distance from 1 tagged as a fold of cycles.
pub const LPC_TAG_TOL: f64 = 1e-6;
/// Splitting magnitude tagged as homoclinic.
pub const HOMOCLINIC_TAG_TOL: f64 = 1e-9;

/// Region identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionId {
    Outside,
    R1,
    R2,
    R3,
    R4,
    R5,
    /// A signature absent from the table.
    Unclassified,
}

impl RegionId {
    pub fn name(&self) -> &'static str {
        match self {
            RegionId::Outside => "outside",
            RegionId::R1 => "1",
            RegionId::R2 => "2",
            RegionId::R3 => "3",
            RegionId::R4 => "4",
            RegionId::R5 => "5",
            RegionId::Unclassified => "unclassified",
        }
    }
    pub fn all() -> [RegionId; 7] {
        use RegionId::*;
        [Outside, R1, R2, R3, R4, R5, Unclassified]
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for RegionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Boundary tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryTag {
    SN,
    HPlus,
    HMinus,
    T,
    P,
}

impl BoundaryTag {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryTag::SN => "SN",
            BoundaryTag::HPlus => "H+",
            BoundaryTag::HMinus => "H-",
            BoundaryTag::T => "T",
            BoundaryTag::P => "P",
        }
    }
}

impl Serialize for BoundaryTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// The observed dynamical signature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Signature {
    pub equilibria: usize,
    pub p_mp: Option<EquilibriumClass>,
    /// Stability of each cycle, innermost first.
    pub cycles_stable: Vec<bool>,
    pub splitting_sign: Option<i32>,
}

/// Region label with boundary tags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionLabel {
    pub id: RegionId,
    pub tags: Vec<BoundaryTag>,
    pub signature: Signature,
}

/// Look up a signature in the table. A `p_mp` on the Hopf curve counts as
/// stable or unstable according to ℓ1.
pub fn region_from_signature(sig: &Signature, p_mp_stable: Option<bool>) -> RegionId {
    if sig.equilibria < 3 {
        return RegionId::Outside;
    }
    let Some(stable) = p_mp_stable else { return RegionId::Unclassified };
    match (stable, sig.cycles_stable.as_slice()) {
        (true, []) => RegionId::R1,
        (true, [false]) => RegionId::R2,
        (false, [true, false]) => RegionId::R3,
        (false, [true]) => RegionId::R4,
        (false, []) => RegionId::R5,
        _ => RegionId::Unclassified,
    }
}

/// Expected splitting sign of each region (`None`: no constraint).
pub fn expected_splitting_sign(id: RegionId) -> Option<i32> {
    match id {
        RegionId::R1 | RegionId::R4 => Some(-1),
        RegionId::R2 | RegionId::R3 | RegionId::R5 => Some(1),
        _ => None,
    }
}

/// Classify a parameter point.
pub fn classify_region(a: Params) -> RegionLabel {
    let mut tags = Vec::new();
    let delta = discriminants(a).delta;
    if delta.abs() <= BOUNDARY_TOL {
        tags.push(BoundaryTag::SN);
    }
    let Some((p, _)) = equilibrium_pair(a).filter(|_| delta > 0.0) else {
        let sig = Signature { equilibria: if delta.abs() <= BOUNDARY_TOL { 2 } else { 1 }, p_mp: None, cycles_stable: vec![], splitting_sign: None };
        return RegionLabel { id: RegionId::Outside, tags, signature: sig };
    };
    let rep = stability_at(p, a, NONHYPERBOLIC_TOL);
    let on_hopf = hopf_f(a.k).map(|h| (a.f - h).abs() <= BOUNDARY_TOL).unwrap_or(false) && rep.det > 0.0;
    let l1 = if on_hopf { l1_kuz_at(p, a).ok() } else { None };
    if on_hopf {
        tags.push(if l1.unwrap_or(0.0) > 0.0 { BoundaryTag::HPlus } else { BoundaryTag::HMinus });
    }
    let p_mp_stable = if rep.class.is_stable() {
        Some(true)
    } else if rep.class.is_unstable() {
        Some(false)
    } else {
        l1.map(|l| l < 0.0)
    };
    let (cycles_stable, splitting_sign) = match census_report(a) {
        Ok(c) => {
            if c.cycles.iter().any(|cy| (cy.nontrivial_multiplier - 1.0).abs() < LPC_TAG_TOL) {
                tags.push(BoundaryTag::T);
            }
            let gap = c.gap();
            if gap.map(|g| g.abs() < HOMOCLINIC_TAG_TOL).unwrap_or(false) {
                tags.push(BoundaryTag::P);
            }
            (c.cycles.iter().map(|cy| cy.is_stable()).collect(), gap.map(|g| if g > 0.0 { 1 } else { -1 }))
        }
        Err(_) => (Vec::new(), None),
    };
    let signature = Signature { equilibria: 3, p_mp: Some(rep.class), cycles_stable, splitting_sign };
    let id = region_from_signature(&signature, p_mp_stable);
    RegionLabel { id, tags, signature }
}
