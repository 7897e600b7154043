use serde::Serialize;

use super::geometry::{disk_geometry_factor, DEFAULT_GEOMETRY_TOL};
use crate::physconst::{planck_mass, C, HBAR, NUCLEON_MASS};
use crate::Result;

/// CSL localization distance, m.
pub const CSL_DISTANCE: f64 = 100e-9;
/// CSL single-nucleon localization rate, Hz.
pub const CSL_RATE: f64 = 1e-16;

/// Position-localization model in the Γ(x) = γ[1 − e^{−x²/4a²}] family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalizationParams {
    /// Localization distance a, m.
    pub a_loc: f64,
    /// Single-nucleon rate γ⁰, Hz.
    pub gamma0: f64,
    /// Rate of the whole body, (M/m₀)²γ⁰f, Hz.
    pub gamma_total: f64,
    /// Geometry factor f.
    pub geometry_factor: f64,
    /// Λ = γ_total/(4a²), Hz/m².
    pub lambda: f64,
}

impl LocalizationParams {
    fn from_parts(total_mass: f64, a_loc: f64, gamma0: f64, geometry_factor: f64) -> Self {
        let scale = (total_mass / NUCLEON_MASS).powi(2);
        let gamma_total = scale * gamma0 * geometry_factor;
        Self { a_loc, gamma0, gamma_total, geometry_factor, lambda: gamma_total / (4.0 * a_loc * a_loc) }
    }
}

/// CSL parameters for a disk of mass `total_mass`, radius `radius`,
/// thickness `thickness`; the geometry factor is integrated numerically.
pub fn csl_localization(total_mass: f64, radius: f64, thickness: f64) -> Result<LocalizationParams> {
    let f = disk_geometry_factor(radius, thickness, CSL_DISTANCE, DEFAULT_GEOMETRY_TOL)?;
    Ok(LocalizationParams::from_parts(total_mass, CSL_DISTANCE, CSL_RATE, f))
}

/// Quantum-gravity (spacetime foam) localization, CSL-shaped with
/// a = ħm_P/(2cm₀²) and γ⁰ = 4a²c⁴m₀⁶/(ħ³m_P³).
///
/// The localization distance is about 1.4 km, so any laboratory disk sits
/// deep in the small-size limit and f = 1.
pub fn qg_localization(total_mass: f64, _radius: f64, _thickness: f64) -> LocalizationParams {
    let mp = planck_mass();
    let m0 = NUCLEON_MASS;
    let a = HBAR * mp / (2.0 * C * m0 * m0);
    let gamma0 = 4.0 * a * a * C.powi(4) * m0.powi(6) / (HBAR.powi(3) * mp.powi(3));
    LocalizationParams::from_parts(total_mass, a, gamma0, 1.0)
}

/// Λ_QG = c⁴M²m₀⁴/(ħ³m_P³).
pub fn qg_lambda_closed_form(total_mass: f64) -> f64 {
    let mp = planck_mass();
    C.powi(4) * total_mass * total_mass * NUCLEON_MASS.powi(4) / (HBAR.powi(3) * mp.powi(3))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalizationTime {
    /// 1/(Λ Δx²); infinite for Δx = 0.
    pub tau: f64,
    /// Set when Δx is not small against 2a.
    pub warning: Option<String>,
}

/// Decoherence time 1/(ΛΔx²) of the small-separation rate Γ ≈ Λx².
pub fn localization_timescale(lambda: f64, dx: f64, a_loc: f64) -> LocalizationTime {
    let tau = if dx == 0.0 || lambda == 0.0 { f64::INFINITY } else { 1.0 / (lambda * dx * dx) };
    let warning = (dx > 0.1 * 2.0 * a_loc)
        .then(|| format!("separation {dx:e} m is not small against 2a = {:e} m; Λx² underestimates Γ", 2.0 * a_loc));
    LocalizationTime { tau, warning }
}
