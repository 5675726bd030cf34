//! Exact computations around gradient points, Milnor-algebra Hilbert points
//! and associated forms of homogeneous polynomials, with Hilbert-Mumford
//! stability checks.

pub mod error;
pub mod lambda;
pub mod linalg;
pub mod milnor;
pub mod poly;
pub mod rational;
pub mod stability;

pub use error::{Error, FramedOnePs, Result};
pub use lambda::OnePs;
pub use linalg::{GradedSubspace, PivotSet};
pub use poly::{DualPolynomial, ExponentVector, LinearChange, Polynomial, UpperTriangularChange};
pub use rational::Rational;
