//! Global dynamics: cycle census, region labels, compactified portraits and
//! parameter-plane maps.

pub mod census;
pub mod compactify;
pub mod map;
pub mod portrait;
pub mod regions;

pub use crate::integrate::{integrate, IntegratorSettings, Trajectory};
pub use census::{census_report, limit_cycle_census, Census, CENSUS_SAMPLES};
pub use compactify::{compactified_portrait, CompactPortrait, InfinityPoint};
pub use map::{region_map, MapSpec, RegionMap};
pub use portrait::{render_portrait, Portrait, PortraitSpec};
pub use regions::{classify_region, BoundaryTag, RegionId, RegionLabel, Signature};
