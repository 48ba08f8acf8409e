//! Error type shared by every analysis module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter outside the admissible domain: {0}")]
    Domain(String),
    #[error("state is not an equilibrium (residual {residual:e})")]
    NotAnEquilibrium { residual: f64 },
    #[error("singular parameter: 8*alpha2 + 8*alpha1 + 1 = 0")]
    SingularParameter,
    #[error("parameters are not on the Hopf curve (trace {trace:e}, det {det:e})")]
    NotOnHopfCurve { trace: f64, det: f64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("integration step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),
    #[error("trajectory did not return to the section")]
    NoReturn,
    #[error("Newton iteration diverged")]
    NewtonDiverged,
    #[error("saddle equilibrium does not exist")]
    SaddleMissing,
    #[error("separatrix never reached the cross-section")]
    SectionMiss,
    #[error("no sign-change bracket found")]
    BracketNotFound,
    #[error("continuation seed does not satisfy the defining system (residual {0:e})")]
    SeedInvalid(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
