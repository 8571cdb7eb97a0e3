//! Free amalgamation over a base, bounded enumeration of extensions, and
//! staged construction with axiom-instance checks.

mod catalog;
mod free;
mod schanuel;
mod stage;
mod witness;

pub use catalog::{
    enumerate_extensions, Cap, CatalogEntry, CatalogOptions, ExtensionCatalog, Filter,
};
pub use free::{disjoint, free_amalgam};
pub use schanuel::{schanuel_sweep, SchanuelReport, Violation};
pub use stage::{build_stage, build_stage_with_cap, LogEntry, StageFile, StagePresentation};
pub use witness::{find_gamma_point, verify_point, GammaPoint, PointWitness, WitnessOptions};

use crate::format::FormatError;
use crate::gamma::GammaError;

#[derive(Debug, thiserror::Error)]
pub enum AmalgamError {
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("precheck failed: {0}")]
    PrecheckFailed(String),
    #[error("content hash mismatch: file says {stored}, content hashes to {computed}")]
    HashMismatch { stored: String, computed: String },
}

impl AmalgamError {
    pub fn is_resource_limit(&self) -> bool {
        match self {
            AmalgamError::Gamma(e) | AmalgamError::Format(FormatError::Gamma(e)) => {
                e.is_resource_limit()
            }
            _ => false,
        }
    }
}
