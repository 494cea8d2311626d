//! Polynomial approximation through Vandermonde systems.
//!
//! Samples of a function at distinct nodes determine a unique interpolating
//! polynomial, obtained here by solving the Vandermonde system directly in
//! either exact rational or `f64` arithmetic. On top of that sit the usual
//! checks and studies: determinant identities, degree detection for unknown
//! polynomials, dyadic refinement with sup-norm error tracking, and reading
//! Taylor coefficients off interpolants without differentiating.
//!
//! Float Vandermonde systems are badly conditioned; results on the float
//! backend come with a node residual, and the exact backend should be used
//! whenever nodes and values are rational.

pub mod analysis;
pub mod cli;
pub mod fixtures;
pub mod functions;
pub mod grid;
pub mod interp;
pub mod io;
pub mod scalar;
pub mod vandermonde;

pub use interp::{fit, EvalError, Polynomial, SampleSet};
pub use scalar::{Backend, Field, Rational, Scalar};
pub use vandermonde::{NodeVector, Permutation, SquareMatrix};
