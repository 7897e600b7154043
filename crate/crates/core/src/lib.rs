//! Simulation toolkit for postselected nested interferometry with
//! optomechanical resonators.
//!
//! The crate covers three layers:
//!
//! * [`fock`] and [`interferometer`]: the single-photon postselection that
//!   heralds a one-phonon excitation, including finite-temperature noise.
//! * [`decoherence`]: closed-form and quadrature timescales for environmental
//!   decoherence, gravitationally induced (Penrose/Diósi) decoherence under
//!   four mass-distribution models, CSL, and quantum-gravity localization.
//! * [`dynamics`]: master-equation integration on a truncated number basis,
//!   producing the visibility decay seen by the outer interferometer.
//!
//! [`devices`] holds the resonator registry and file format, and [`cli`]
//! implements the commands behind the `optomech` binary.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod decoherence;
pub mod devices;
pub mod dynamics;
mod error;
pub mod fock;
pub mod interferometer;
pub mod physconst;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
