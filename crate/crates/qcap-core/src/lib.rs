//! Numerical toolkit for strong-converse upper bounds on quantum channel
//! capacities.
//!
//! The crate is `no_std` (it needs `alloc`) and is organized bottom-up:
//!
//! - [`linalg`]: dense complex matrices, a cyclic Jacobi Hermitian
//!   eigensolver, matrix functions, tensor products and partial operations.
//! - [`state`] and [`channel`]: density operators, pure states, channels in
//!   Kraus form with their Choi operators.
//! - [`divergence`]: von Neumann entropy, relative entropy, the sandwiched
//!   Rényi relative entropy and coherent information, in bits.
//! - [`ppt`]: the PPT′ set, its Dykstra projection and the inner solver for
//!   the (Rényi) Rains relative entropy of a bipartite state.
//! - [`bounds`]: channel-level quantities (coherent information, Rains
//!   information) and the closed-form strong-converse bounds built on them.
//! - [`zoo`]: identity, dephasing, erasure and depolarizing channels.
//! - [`codes`]: unassisted entanglement-generation codes and the one-shot
//!   fidelity bound.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod channel;
pub mod codes;
pub mod divergence;
mod error;
pub mod linalg;
pub mod ppt;
pub mod random;
pub mod report;
pub mod state;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, HermitianOperator, C64};

/// Hermiticity tolerance accepted by [`HermitianOperator::new`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues at or below this value are treated as zero by support-aware
/// matrix functions.
pub const SUPPORT_EPS: f64 = 1e-10;
