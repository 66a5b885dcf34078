//! Exact calculus of multivector fields, differential forms and
//! first-order polydifferential operators over Laurent polynomial
//! coefficients, with the reduction of homogeneous Poisson-type tensors on
//! `N x R` to Jacobi-type operators on `N`.
//!
//! Everything is generic over the coefficient [`ring::Field`]; the aliases
//! below fix exact rationals, which is what the frontend and the checks use.

pub mod error;
pub mod exterior;
pub mod frontend;
pub mod homogeneity;
pub mod jacobi_calculus;
pub mod linalg;
pub mod ring;
pub mod sampling;
pub mod selftest;
pub mod structures;

pub use error::{Error, Result};
pub use ring::Chart;

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
/// Laurent polynomial with rational coefficients.
pub type Scalar = ring::Laurent<Rational>;
pub type Multivector = exterior::Multivector<Rational>;
pub type DiffForm = exterior::DiffForm<Rational>;
pub type FirstOrderOp = jacobi_calculus::FirstOrderOp<Rational>;
pub type FormPair = jacobi_calculus::FormPair<Rational>;
pub type HomogeneousSetup = homogeneity::HomogeneousSetup<Rational>;
