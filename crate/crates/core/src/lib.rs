//! Entrywise positivity preservers in fixed dimension.
//!
//! The crate computes the thresholds that decide when a power sum with one
//! negative coefficient acts entrywise on positive semidefinite matrices
//! without destroying positivity, and checks such statements numerically.
//! Two independent engines (tableau counts and determinant ratios) back every
//! Schur polynomial evaluation, and exact rational arithmetic is used
//! wherever the exponents are integers.

pub mod error;
pub mod hciz;
pub mod matrix;
pub mod order;
pub mod preserver;
pub mod rational;
pub mod symfun;
pub mod thresholds;
pub mod rng;

pub use error::{Error, Result};
