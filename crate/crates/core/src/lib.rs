//! Discrete-time population dynamics: map simulation, equilibrium stability
//! classification, basin-of-attraction scans, and optimal harvesting.
//!
//! The library is organized around four modules:
//!
//! * [`maps`] — the population maps themselves (single-species, prey–predator,
//!   and a generalized form) plus trajectory simulation,
//! * [`stability`] — equilibria, Jacobians, and stability classification via
//!   both closed-form conditions and eigenvalue moduli,
//! * [`basin`] — numeric fixed-point location and grid scans that test whether
//!   an equilibrium attracts every sampled interior initial condition,
//! * [`control`] — the discrete forward-backward sweep for optimal harvesting
//!   and a brute-force enumeration oracle.
//!
//! Grid scans, enumeration, and parameter sweeps are data-parallel when the
//! `parallel` feature (default) is enabled; sequential twins are always
//! available and produce bitwise-identical results.

pub mod basin;
pub mod control;
pub mod error;
mod exec;
pub mod maps;
pub mod stability;

pub use error::{Error, Result};

/// Crate version, re-exported for run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
