//! Iterated quadratic maps `x^2 + c` over the integers and over `Z[t]`.
//!
//! The crate computes critical orbits of composition sequences, certifies
//! stability and maximality of the associated towers level by level, classifies
//! the sets whose semigroup orbit of `0` is obstructed by a finite orbit point,
//! counts parity properties exactly over coefficient boxes, models the
//! fixed-point process on the binary tree, and scans primes dividing orbits.
//!
//! Sequences are written outermost first: `gamma_n = theta_1 o ... o theta_n`.

pub mod algebra;
pub mod census;
pub mod certify;
pub mod dynamics;
pub mod error;
pub mod galois_process;
pub mod prime_density;
mod serde_util;

pub use error::{Error, Result};

/// Version string embedded in every serialized report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
