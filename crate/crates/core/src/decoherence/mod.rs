//! Decoherence timescales for a resonator held in a superposition of
//! displacements separated by its zero-point motion x₀.
//!
//! Four mechanisms are covered:
//!
//! * environmental (Caldeira–Leggett bath): [`eid_timescale`]
//! * gravitationally induced, under four mass-distribution models:
//!   [`penrose_timescale`]
//! * continuous spontaneous localization: [`csl_localization`]
//! * quantum-gravity localization: [`qg_localization`]
//!
//! [`full_report`] gathers them per device and flags which ones act faster
//! than environmental decoherence.

mod eid;
mod geometry;
mod localization;
mod penrose;
mod report;

pub use eid::{eid_rate_identity, eid_temperature, eid_timescale, eid_timescale_quoted};
pub use geometry::{disk_geometry_factor, DEFAULT_GEOMETRY_TOL};
pub use localization::{
    csl_localization, localization_timescale, qg_lambda_closed_form, qg_localization, LocalizationParams,
    LocalizationTime, CSL_DISTANCE, CSL_RATE,
};
pub use penrose::{
    brute_force_interaction, brute_force_penrose, overlap_potential, penrose_energy, penrose_pair, penrose_timescale,
    sphere_radius, BruteForceGrid, MassDistributionModel, SpherePair, HOMOGENEOUS_MASS, HOMOGENEOUS_RADIUS,
};
pub use report::{full_report, Mechanism, MechanismTimescale, TimescaleReport};
