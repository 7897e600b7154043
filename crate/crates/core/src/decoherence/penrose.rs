//! Gravitational self-energy of the difference between two displaced mass
//! distributions, each modelled as M/m uniform spheres of mass m and radius a.

use std::f64::consts::PI;

use serde::Serialize;

use crate::devices::{DeviceParams, Material};
use crate::physconst::{G, HBAR, K_B};
use crate::quadrature::{self, Budget};
use crate::{Error, Result};

/// Sphere radius of the homogeneous model, m.
pub const HOMOGENEOUS_RADIUS: f64 = 30e-6;
/// Mass of the homogeneous model, kg.
pub const HOMOGENEOUS_MASS: f64 = 60e-12;

/// How the superposed mass is resolved into spheres.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum MassDistributionModel {
    /// Sphere radius equal to the resonator zero-point motion.
    ResonatorZeroPoint,
    /// Nuclear radius r₀A^{1/3}.
    NuclearRadius,
    /// Zero-point motion of nuclei in a Debye lattice.
    NuclearZeroPointDebye,
    /// One sphere holding the whole mass.
    HomogeneousMass { radius: f64, mass: f64 },
}

impl MassDistributionModel {
    pub fn homogeneous() -> Self {
        MassDistributionModel::HomogeneousMass { radius: HOMOGENEOUS_RADIUS, mass: HOMOGENEOUS_MASS }
    }

    pub fn all() -> [MassDistributionModel; 4] {
        [
            MassDistributionModel::ResonatorZeroPoint,
            MassDistributionModel::NuclearRadius,
            MassDistributionModel::NuclearZeroPointDebye,
            MassDistributionModel::homogeneous(),
        ]
    }

    pub fn label(&self) -> &'static str {
        match self {
            MassDistributionModel::ResonatorZeroPoint => "penrose-zero-point",
            MassDistributionModel::NuclearRadius => "penrose-nuclear-radius",
            MassDistributionModel::NuclearZeroPointDebye => "penrose-debye",
            MassDistributionModel::HomogeneousMass { .. } => "penrose-homogeneous",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePair {
    /// Total superposed mass M, kg.
    pub total_mass: f64,
    /// Mass per sphere m, kg.
    pub sphere_mass: f64,
    /// Sphere radius a, m.
    pub radius: f64,
    /// Separation Δx, m.
    pub separation: f64,
}

impl SpherePair {
    pub fn new(total_mass: f64, sphere_mass: f64, radius: f64, separation: f64) -> Result<Self> {
        for (name, v) in [("total_mass", total_mass), ("sphere_mass", sphere_mass), ("radius", radius)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !(separation >= 0.0) || !separation.is_finite() {
            return Err(Error::param("separation", format!("must be non-negative, got {separation}")));
        }
        Ok(Self { total_mass, sphere_mass, radius, separation })
    }
}

/// Mutual potential energy of two uniform spheres (total mass M resolved into
/// spheres of mass m and radius a) whose centres are `dx` apart.
pub fn overlap_potential(total_mass: f64, sphere_mass: f64, radius: f64, dx: f64) -> f64 {
    let gmm = G * total_mass * sphere_mass;
    let a = radius;
    if dx > 2.0 * a {
        -gmm / dx
    } else {
        let a2 = a * a;
        let inner = (12.0 * a2 - 5.0 * dx * dx) / (10.0 * a2 * a)
            - (dx.powi(5) - 30.0 * dx.powi(3) * a2) / (160.0 * a2 * a2 * a2);
        -gmm * inner
    }
}

/// Δ_P = 4π(E₁₂ + E₂₁ − E₁₁ − E₂₂) = 8π(E(Δx) − E(0)).
///
/// The difference is expanded analytically so the result stays accurate when
/// Δx/a is far below machine precision relative to 1.
pub fn penrose_energy(sp: &SpherePair) -> f64 {
    let gmm = G * sp.total_mass * sp.sphere_mass;
    let a = sp.radius;
    let d = sp.separation;
    let diff = if d > 2.0 * a {
        gmm * (1.2 / a - 1.0 / d)
    } else {
        let r = d / a;
        gmm / a * r * r * (0.5 - 0.1875 * r + r * r * r / 160.0)
    };
    8.0 * PI * diff
}

/// Resolution target for [`brute_force_penrose`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteForceGrid {
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Default for BruteForceGrid {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_evaluations: quadrature::DEFAULT_BUDGET }
    }
}

/// Potential of a unit-radius, unit-mass uniform sphere at distance `s` from
/// its centre (G = 1), summed shell by shell: each shell of radius r' acts as
/// a point mass at the centre outside it and as a constant 1/r' inside.
fn sphere_potential(s: f64, grid: &BruteForceGrid, budget: &Budget) -> Result<f64> {
    let shells = quadrature::integrate_with_breaks(
        |r: f64| 3.0 * r * r / r.max(s),
        0.0,
        1.0,
        &[s],
        grid.rel_tol * 1e-2,
        0.0,
        budget,
    )?;
    Ok(-shells.value)
}

/// Dimensionless mutual energy e(d) of two unit spheres at centre distance d,
/// e = (3/4π) ∫_{|y−d ẑ|<1} Φ(|y|) d³y, reduced by axial symmetry to (r, μ).
fn mutual_energy_unit(d: f64, grid: &BruteForceGrid, budget: &Budget) -> Result<f64> {
    let tol = grid.rel_tol;
    let outer = |r: f64| -> Result<f64> {
        if r == 0.0 {
            return Ok(0.0);
        }
        let shell = if d == 0.0 {
            2.0 * sphere_potential(r, grid, budget)?
        } else {
            // distance to the other centre crosses the sphere surface at μ*
            let mu_star = (1.0 - r * r - d * d) / (2.0 * r * d);
            let mut err = None;
            let est = quadrature::integrate_with_breaks(
                |mu: f64| {
                    let s = (r * r + d * d + 2.0 * r * d * mu).max(0.0).sqrt();
                    match sphere_potential(s, grid, budget) {
                        Ok(v) => v,
                        Err(e) => {
                            err.get_or_insert(e);
                            0.0
                        }
                    }
                },
                -1.0,
                1.0,
                &[mu_star],
                tol * 1e-1,
                0.0,
                budget,
            )?;
            if let Some(e) = err {
                return Err(e);
            }
            est.value
        };
        Ok(1.5 * r * r * shell)
    };
    let mut err = None;
    let breaks = [(1.0 - d).abs()];
    let est = quadrature::integrate_with_breaks(
        |r| match outer(r) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        1.0,
        &breaks,
        tol,
        0.0,
        budget,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(est.value),
    }
}

/// Mutual energy E₁₂ by direct numerical integration of the 1/|x−y| double
/// integral for uniform spheres, scaled by the sphere count M/m.
pub fn brute_force_interaction(
    total_mass: f64,
    sphere_mass: f64,
    radius: f64,
    dx: f64,
    grid: &BruteForceGrid,
) -> Result<f64> {
    let budget = Budget::new(grid.max_evaluations);
    let e = mutual_energy_unit(dx / radius, grid, &budget)?;
    Ok(G * total_mass * sphere_mass / radius * e)
}

/// Δ_P from brute-force E₁₂(Δx) and E₁₁ = E₁₂(0).
pub fn brute_force_penrose(sp: &SpherePair, grid: &BruteForceGrid) -> Result<f64> {
    let e12 = brute_force_interaction(sp.total_mass, sp.sphere_mass, sp.radius, sp.separation, grid)?;
    let e11 = brute_force_interaction(sp.total_mass, sp.sphere_mass, sp.radius, 0.0, grid)?;
    Ok(8.0 * PI * (e12 - e11))
}

/// Sphere radius a for the chosen model.
pub fn sphere_radius(model: &MassDistributionModel, device: &DeviceParams, material: &Material) -> Result<f64> {
    match *model {
        MassDistributionModel::ResonatorZeroPoint => Ok(device.x0()),
        MassDistributionModel::NuclearRadius => Ok(material.r0 * f64::from(material.mass_number).cbrt()),
        MassDistributionModel::NuclearZeroPointDebye => {
            let theta_d = material
                .debye_temperature
                .ok_or_else(|| Error::Config(format!("material `{}` has no Debye temperature", material.name)))?;
            Ok(3.0 * HBAR / (2.0 * (K_B * theta_d * material.atomic_mass).sqrt()))
        }
        MassDistributionModel::HomogeneousMass { radius, .. } => {
            if radius > 0.0 {
                Ok(radius)
            } else {
                Err(Error::Config(format!("homogeneous sphere radius must be positive, got {radius}")))
            }
        }
    }
}

/// Spheres separated by the device zero-point motion. The homogeneous model
/// replaces both M and m by its own mass.
pub fn penrose_pair(device: &DeviceParams, model: &MassDistributionModel, material: &Material) -> Result<SpherePair> {
    let a = sphere_radius(model, device, material)?;
    let (total, sphere) = match *model {
        MassDistributionModel::HomogeneousMass { mass, .. } => (mass, mass),
        _ => (device.mass, material.nuclear_mass()),
    };
    SpherePair::new(total, sphere, a, device.x0())
}

/// τ_P = ħ/Δ_P.
pub fn penrose_timescale(device: &DeviceParams, model: &MassDistributionModel, material: &Material) -> Result<f64> {
    Ok(HBAR / penrose_energy(&penrose_pair(device, model, material)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::builtin;

    const M: f64 = 1e-12;
    const SM: f64 = 3e-25;
    const A: f64 = 5e-15;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn self_energy() {
        let e = overlap_potential(M, SM, A, 0.0);
        assert!(rel(e, -1.2 * G * M * SM / A) < 1e-14);
    }

    #[test]
    fn branches_meet_at_contact() {
        let inner = overlap_potential(M, SM, A, 2.0 * A);
        let outer = -G * M * SM / (2.0 * A);
        assert!(rel(inner, outer) < 1e-12);
        let just_outside = overlap_potential(M, SM, A, 2.0 * A * (1.0 + 1e-15));
        assert!(rel(just_outside, outer) < 1e-12);
    }

    #[test]
    fn unit_overlap_coefficient() {
        // 7/10 + 29/160
        let e = overlap_potential(M, SM, A, A);
        assert!(rel(e, -0.88125 * G * M * SM / A) < 1e-13);
    }

    #[test]
    fn energy_is_difference_of_potentials() {
        for r in [0.1, 0.5, 1.0, 1.7, 2.0, 3.5] {
            let sp = SpherePair::new(M, SM, A, r * A).unwrap();
            let direct = 8.0 * PI * (overlap_potential(M, SM, A, r * A) - overlap_potential(M, SM, A, 0.0));
            assert!(rel(penrose_energy(&sp), direct) < 1e-12, "dx/a = {r}");
        }
    }

    #[test]
    fn no_separation_no_energy() {
        let sp = SpherePair::new(M, SM, A, 0.0).unwrap();
        assert_eq!(penrose_energy(&sp), 0.0);
    }

    #[test]
    fn small_separation_limit() {
        let sp = SpherePair::new(M, SM, A, A / 100.0).unwrap();
        let limit = 4.0 * PI * G * M * SM * sp.separation.powi(2) / A.powi(3);
        assert!(rel(penrose_energy(&sp), limit) <= 0.01);
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(SpherePair::new(0.0, SM, A, A).is_err());
        assert!(SpherePair::new(M, SM, -A, A).is_err());
        assert!(SpherePair::new(M, SM, A, -1.0).is_err());
    }

    #[test]
    fn radii_for_tantalum() {
        let ta = Material::tantalum();
        let p1 = builtin("proposed1").unwrap();
        let zp = sphere_radius(&MassDistributionModel::ResonatorZeroPoint, &p1, &ta).unwrap();
        assert!(rel(zp, 5.3e-15) < 0.02);
        let nuc = sphere_radius(&MassDistributionModel::NuclearRadius, &p1, &ta).unwrap();
        assert!((nuc - 7e-15).abs() < 0.1e-15, "{nuc:e}");
        let debye = sphere_radius(&MassDistributionModel::NuclearZeroPointDebye, &p1, &ta).unwrap();
        assert!((debye - 5e-12).abs() < 0.1e-12, "{debye:e}");
    }

    #[test]
    fn missing_debye_temperature() {
        let mut ta = Material::tantalum();
        ta.debye_temperature = None;
        let p1 = builtin("proposed1").unwrap();
        assert!(matches!(
            sphere_radius(&MassDistributionModel::NuclearZeroPointDebye, &p1, &ta),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn brute_force_point_mass_limit() {
        let e = brute_force_interaction(M, SM, A, 4.0 * A, &BruteForceGrid::default()).unwrap();
        assert!(rel(e, -G * M * SM / (4.0 * A)) < 1e-3);
    }

    #[test]
    fn brute_force_budget_exhaustion() {
        let grid = BruteForceGrid { rel_tol: 1e-12, max_evaluations: 500 };
        assert!(matches!(brute_force_interaction(M, SM, A, A, &grid), Err(Error::Convergence { .. })));
    }
}
