//! Quantum-dynamics engine for a molecule strongly coupled to a single
//! quantized cavity mode: dressed (polariton) potential energy surfaces,
//! cavity-induced non-adiabatic couplings, grid-based wave packet
//! propagation with a Krylov exponential integrator, and population /
//! transient-absorption observables.
//!
//! Atomic units everywhere inside; see [`units`] for the I/O conversions.

pub mod couplings;
pub mod dressing;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod observables;
pub mod scenario;
pub mod surfaces;
pub mod units;

pub use error::{Error, Result};
