//! Boundary geometry of the spaces of positive definite matrices.
//!
//! Modules, bottom up: [`linalg`] numerical kernels, [`spd`] points and geodesics,
//! [`satake`] flag-and-form limits, [`pencil`] pencil classification,
//! [`polytope`] tree-partition combinatorics, [`growth`]/[`xi`] exact limits in
//! the Ξ spaces, [`boundary`] hybrid boundary points, [`laurent`]/[`urchin`]
//! meromorphic curves, and [`json`] serialization schemas.

pub mod boundary;
pub mod error;
pub mod growth;
pub mod json;
pub mod laurent;
pub mod linalg;
pub mod pencil;
pub mod polytope;
pub mod satake;
pub mod spd;
pub mod urchin;
pub mod xi;

pub use error::{Error, Result};
