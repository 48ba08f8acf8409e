//! Bifurcation analysis of the spatially homogeneous Gray–Scott kinetics.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] – the vector field and its exact jets,
//! * [`equilibria`] – closed-form equilibria, stability and bifurcation curves,
//! * [`poly`], [`exact`] – exact polynomial and rational arithmetic,
//! * [`bt`] – Bogdanov–Takens checkpoint verification,
//! * [`bautin`] – Lyapunov coefficients and the generalized Hopf point,
//! * [`integrate`] – Dormand–Prince 5(4) integration with dense output,
//! * [`continuation`] – pseudo-arclength continuation, cycles, LPC and homoclinic curves,
//! * [`dynamics`] – limit-cycle census, region classification and phase portraits.

pub mod error;
pub mod exact;
pub mod model;
pub mod poly;
pub mod equilibria;
pub mod bt;
pub mod normal_form;
pub mod bautin;
pub mod integrate;
pub mod continuation;
pub mod dynamics;

pub use error::{Error, Result};
pub use model::{jet, vector_field, Jet, Params, State};
