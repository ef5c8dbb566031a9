//! Desk-scale constructions around coarse equivalence classes of glued
//! metrics: exact min-plus composition with order certificates, the clopen
//! upset topology on posets with its finite-resolution spectrum, banded
//! operators with constructive decomposition and factorization, continuous
//! fields of matrix bimodules with projection stabilization, and the
//! diagonal block-matrix example with its corona evaluation.
//!
//! Everything order- or identity-shaped is computed in exact rational
//! arithmetic; only norms, eigenvalues and the grid-field constructions use
//! floats, with pinned tolerances.

pub mod error;
pub mod linalg;
pub mod metric;
pub mod numeric;
pub mod poset;
pub mod roe;

pub use error::{Error, Result};
