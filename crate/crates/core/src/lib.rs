//! Dirichlet and Neumann spectra of bordered surfaces, and a numerical check
//! of the reciprocal-eigenvalue inequality obtained by conformal
//! transplantation onto the hemisphere.

pub mod balance;
pub mod cli;
pub mod error;
pub mod fem;
pub mod fixtures;
pub mod json;
pub mod mesh;
pub mod sparse;
pub mod transplant;
pub mod verify;

pub use error::{Error, Result};
