//! Exact integer and rational linear algebra.

mod matrix;
mod normal_form;
mod rational;
mod subspace;

pub use matrix::IntMatrix;
pub use normal_form::{hnf, kernel_basis, rank, snf};
pub use rational::{primitive_integer_vector, QMatrix};
pub use subspace::{is_sign_normalized, Subspace};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;
