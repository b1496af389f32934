//! Covariant decorrelation of bipartite quantum states.
//!
//! Two-qubit states carrying SU(2) signals are mapped by covariant channels
//! to states whose correlations vanish while keeping as much of the local
//! signal as possible. Gaussian two-mode states are handled by additive
//! classical noise.

pub mod channels;
pub mod cloning;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod qubit;
pub mod solver;

pub use error::{Error, Result};
