//! Simulation core for the periodically driven cluster spin chain.
//!
//! Two engines live here. The analytic engine ([`momentum`], [`analytic`])
//! evaluates the free-fermion solution of the integrable chain mode by mode.
//! The state-vector engines ([`spin`], [`walk`]) evolve exact amplitudes for
//! the spin chain alone and for the chain coupled to a quantum walker.
//! [`qinfo`] extracts reduced density matrices and entanglement measures from
//! either engine.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
mod error;
pub mod kernels;
pub mod linalg;
pub mod momentum;
mod params;
pub mod qinfo;
pub mod spin;
pub mod walk;

pub use error::{Error, Result};
pub use params::{CouplingMode, ModelParams, WalkParams};

pub use num_complex::Complex64;

/// Crate version, recorded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest chain handled by the spin-only state-vector engine.
pub const MAX_SPIN_SITES: usize = 24;
/// Largest chain handled by the walk engine (`L * 2 * 2^L` amplitudes).
pub const MAX_WALK_SITES: usize = 16;
