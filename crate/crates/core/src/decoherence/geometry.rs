//! Geometry factor f(R, b, a) for a disk of radius R and thickness b moving
//! along its axis, with localization distance a:
//!
//! f = 4(2a/R)⁴(2a/b)²[1 − e^{−b²/4a²}] ∫₀ᵘ∫₀ᵘ x x′ e^{−(x²+x′²)} I₀(2xx′) dx dx′,
//! u = R/2a.
//!
//! The kernel is evaluated as e^{−(x−x′)²}·[e^{−2xx′}I₀(2xx′)] so it stays
//! finite for u ≫ 1.

use crate::quadrature::{self, Budget, DEFAULT_BUDGET};
use crate::special::bessel_i0e;
use crate::{Error, Result};

pub const DEFAULT_GEOMETRY_TOL: f64 = 1e-8;

// e^{−40²} underflows, so the inner integral can start 40 below the diagonal.
const DIAGONAL_CUTOFF: f64 = 40.0;

fn kernel(x: f64, xp: f64) -> f64 {
    let d = x - xp;
    x * xp * (-d * d).exp() * bessel_i0e(2.0 * x * xp)
}

/// ∫₀ᵘ∫₀ᵘ x x′ e^{−(x−x′)²} I₀ₑ(2xx′), folded onto x′ ≤ x by symmetry.
fn disk_integral(u: f64, tol: f64, budget: &Budget) -> Result<f64> {
    let mut failure = None;
    let outer = quadrature::integrate(
        |x| {
            if failure.is_some() || x == 0.0 {
                return 0.0;
            }
            let lo = (x - DIAGONAL_CUTOFF).max(0.0);
            match quadrature::integrate(|xp| kernel(x, xp), lo, x, tol * 1e-2, 0.0, budget) {
                Ok(est) => est.value,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        0.0,
        u,
        tol,
        0.0,
        budget,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(2.0 * outer.value),
    }
}

/// Geometry factor for a disk of radius `radius` and thickness `thickness`
/// with localization distance `a_loc`, to relative tolerance `tol`.
///
/// Far outside the quadrature's useful range, closed-form limits are used:
/// (2a/R)²(2a/b)² once its relative error ~1/(u√π) + e^{−(b/2a)²} is below
/// `tol`, and 1 once the disk is small enough that f − 1 is below `tol`.
pub fn disk_geometry_factor(radius: f64, thickness: f64, a_loc: f64, tol: f64) -> Result<f64> {
    for (name, v) in [("radius", radius), ("thickness", thickness), ("a_loc", a_loc)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::param(name, format!("must be positive, got {v}")));
        }
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::param("tol", format!("must lie in (0, 1e-4], got {tol}")));
    }
    let u = radius / (2.0 * a_loc);
    let v = thickness / (2.0 * a_loc);

    let edge = 1.0 / (u * std::f64::consts::PI.sqrt());
    if edge < 0.5 * tol && (-v * v).exp() < 0.5 * tol {
        return Ok((u * u * v * v).recip());
    }
    if u * u + v * v < 0.25 * tol {
        return Ok(1.0);
    }

    let budget = Budget::new(DEFAULT_BUDGET);
    let integral = disk_integral(u, tol, &budget)?;
    let thickness_term = -(-v * v).exp_m1() / (v * v);
    Ok(4.0 * integral / u.powi(4) * thickness_term)
}
