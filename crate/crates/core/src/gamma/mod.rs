//! Finitely presented Γ-field extensions of a base, their predimension, and
//! the strongness calculus built on it.

mod base;
mod classify;
mod delta;
pub(crate) mod hull;
mod presentation;
pub(crate) mod rotund;

pub use base::{BasePresentation, Config, GammaElement, KernelTag, D, GROUND, MAX_TORSION_ORDER};
pub use classify::{classify, Classification, ClassificationReport};
pub use delta::{delta, Predim};
pub use hull::{gammadim, hull, hull_with, HullResult};
pub use presentation::{Factor, GammaPresentation};
pub use rotund::{is_strong, is_strongly_rotund, RotundityReport, SweepOptions, Verdict, Witness};

use crate::poly::PolyError;
use crate::variety::{FreenessReport, VarietyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GammaError {
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error("locus is not free")]
    NotFree(Box<FreenessReport>),
    #[error("kernel preservation fails ({clause}): r = {r:?} gives x = {x}, y = {y}")]
    KernelViolation {
        clause: String,
        r: Vec<i64>,
        x: String,
        y: String,
    },
    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("presentations live over different bases")]
    BaseMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl GammaError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            GammaError::Variety(VarietyError::Poly(PolyError::ResourceLimit(_)))
        )
    }
}
