//! Theta sums for skew translations of the two-torus.
//!
//! The map `(p, q) -> (p + alpha, q + p)` has Birkhoff sums for the harmonic
//! `e(kp + lq)` that are, up to a unimodular factor, values of a Jacobi theta
//! function with a sharp cut-off window. This crate evaluates both sides, the
//! modular symmetries of the theta function, the Diophantine renormalization
//! data `c_N, d_N, a_N` and the limit random variables that describe the
//! value distribution of the renormalized sums.

pub mod checks;
pub mod cli;
pub mod error;
pub mod limits;
pub mod modular;
pub mod phase;
pub mod quad;
pub mod renorm;
pub mod rng;
pub mod skew;
pub mod stats;
pub mod theta;

pub use error::{Error, Result};
