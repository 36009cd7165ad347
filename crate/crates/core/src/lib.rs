//! Congruence canonical forms of 2×2 and 3×3 complex matrices.
//!
//! The crate classifies a matrix up to congruence `A ↦ SᵀAS` (plain
//! transpose over ℂ), computes the codimension of its class and the
//! miniversal deformation pattern, and answers closure queries against the
//! closure graphs for congruence classes and bundles. A perturbation harness
//! checks the graphs numerically.

pub mod canonical;
pub mod cli;
pub mod closuregraph;
pub mod deformation;
pub mod error;
pub mod matrixcore;
pub mod perturbation;

pub use canonical::{bundle_of, canonical_matrix, classify, Bundle, CanonicalClass, ClassTag};
pub use error::{Error, Result};
pub use matrixcore::{ComplexMatrix, Tolerance};
pub use num_complex::Complex64;
