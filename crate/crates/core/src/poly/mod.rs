//! Multivariate polynomials over Q, Gröbner bases and ideal operations.

mod groebner;
mod ideal;
mod monomial;
mod parse;
#[allow(clippy::module_inception)]
mod poly;

pub use groebner::{Budget, GroebnerBasis};
pub use ideal::{eliminate, ideal_dim, max_independent_set, saturate, Ideal};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_poly;
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("dimension of the unit ideal is undefined")]
    DimensionOfUnitIdeal,
}
