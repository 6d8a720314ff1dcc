//! Exact toric K-stability data for Delzant polytopes and floating-point
//! numerics for symplectic potentials on them.

pub mod catalog;
pub mod error;
pub mod json;
pub mod kahler;
pub mod lp;
pub mod oracle;
pub mod plconvex;
pub mod polytope;
pub mod rational;
pub mod stability;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
