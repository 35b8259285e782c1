//! Random generation of finite unital algebras over finite fields.
//!
//! The crate computes exact and Monte Carlo probabilities that random tuples
//! generate an algebra, classifies maximal subalgebras, evaluates subalgebra
//! zeta functions and checks the associated inequalities on small instances.

pub mod algebra;
pub mod closure;
pub mod counting;
pub mod error;
pub mod estimator;
pub mod gfield;
pub mod linalg;
pub mod maxsub;
pub mod parse;
pub mod report;
pub mod sampler;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar used by the counting layer.
pub type Rational = num_rational::BigRational;
/// Floating-point scalar used for Monte Carlo estimates.
pub type Real = f64;
