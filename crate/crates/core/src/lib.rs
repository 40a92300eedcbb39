//! Solving sparse polynomial systems on the complex torus by recursive
//! decomposition into lacunary and triangular pieces.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod families;
pub mod geometry;
pub mod intlinalg;
pub mod random;
pub mod solver;
mod subsets;
pub mod supports;
pub mod torus;
pub mod tracking;

pub use error::{Error, Result};
