//! Jacobi theta functions as an autonomous dynamical system.
//!
//! The crate evaluates theta series and elliptic functions, integrates the
//! theta system and its polynomial reductions, straightens the four-dimensional
//! flow, verifies its Poisson brackets, quantizes it on a monomial basis and
//! computes the band structure of the resulting Mathieu problem.

pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod mathieu;
pub mod poisson;
pub mod quadrature;
pub mod quantize;
pub mod straightening;

pub use error::{Error, Result};
pub use num_complex::Complex64;
