//! Physical constants (CODATA 2018, SI units).
//!
//! Every formula in the crate works in SI; unit conversion happens only when
//! reading device files and formatting output.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Newtonian gravitational constant, m³/(kg·s²).
pub const G: f64 = 6.674_30e-11;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Unified atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Nucleon mass used by the collapse models (proton mass), kg.
pub const NUCLEON_MASS: f64 = 1.672_621_923_69e-27;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub k_b: f64,
    pub g: f64,
    pub c: f64,
    pub amu: f64,
    /// Nucleon mass m₀.
    pub m0: f64,
    /// Planck mass, always derived as sqrt(ħc/G).
    pub m_planck: f64,
}

pub fn constants() -> Constants {
    Constants { hbar: HBAR, k_b: K_B, g: G, c: C, amu: AMU, m0: NUCLEON_MASS, m_planck: planck_mass() }
}

pub fn planck_mass() -> f64 {
    (HBAR * C / G).sqrt()
}
