//! Permutation symmetry of exactly solvable `N`-particle oscillator models and
//! the levels a Slater-determinant CI can and cannot reach.

pub mod ci;
pub mod cli;
pub mod error;
pub mod levelsym;
pub mod oscillator;
mod serde_float;
pub mod spin;
pub mod symgroup;

pub use error::{Error, Result};
