//! Inner-interferometer postselection on a single-photon dark-port click.
//!
//! The optical modes never appear numerically: projecting onto the dark port
//! leaves the two-branch mechanical state ½[e^{iφ}|γ(t)+α(t)⟩ − |γ(t)⟩],
//! which is built here directly from [`crate::fock`] constructors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::fock::{self, StateVector};
use crate::physconst::{HBAR, K_B};
use crate::{Error, Result, C64};

/// Above this coupling the lowest-order formulas lose accuracy.
pub const KAPPA_WARN: f64 = 0.05;

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 100_000;

const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionParams {
    /// κ = g/ω_m.
    pub kappa: f64,
    /// θ = ω_m t, radians.
    pub theta: f64,
    /// Initial coherent amplitude γ.
    pub gamma0: C64,
}

impl InteractionParams {
    pub fn new(kappa: f64, theta: f64, gamma0: C64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::param("kappa", format!("must be positive, got {kappa}")));
        }
        if !theta.is_finite() {
            return Err(Error::param("theta", "must be finite"));
        }
        Ok(Self { kappa, theta, gamma0 })
    }

    /// Whether the lowest-order (κ ≪ 1) formulas are trustworthy.
    pub fn is_weak_coupling(&self) -> bool {
        self.kappa <= KAPPA_WARN
    }

    pub fn warning(&self) -> Option<String> {
        (!self.is_weak_coupling()).then(|| {
            format!("kappa = {} exceeds {KAPPA_WARN}; lowest-order postselection formulas are unreliable", self.kappa)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolvedAmplitudes {
    pub gamma_t: C64,
    pub alpha_t: C64,
    pub phi_t: f64,
}

/// Single-photon displaced-oscillator solution:
/// γ(t) = γe^{−iθ}, α(t) = κ(1 − e^{−iθ}), φ(t) = κ²(θ − sin θ).
pub fn evolved_amplitudes(p: &InteractionParams) -> EvolvedAmplitudes {
    let rot = C64::from_polar(1.0, -p.theta);
    EvolvedAmplitudes {
        gamma_t: p.gamma0 * rot,
        alpha_t: (C64::new(1.0, 0.0) - rot) * p.kappa,
        phi_t: p.kappa * p.kappa * (p.theta - p.theta.sin()),
    }
}

#[derive(Clone, Debug)]
pub struct PostselectionResult {
    /// Unnormalized conditional mechanical state.
    pub state: StateVector,
    /// ⟨ψ_ps|ψ_ps⟩.
    pub probability: f64,
    /// Weight orthogonal to |γ(t)⟩: a phonon actually delivered.
    pub signal: f64,
    /// |⟨γ(t)|ψ_ps⟩|²: dark-port clicks with no phonon added.
    pub noise: f64,
}

/// Exact dark-port conditional state, no small-κ expansion.
///
/// `dim` must hold both |γ(t)⟩ and |γ(t)+α(t)⟩ within the truncation limit.
pub fn postselected_state_exact(p: &InteractionParams, dim: usize) -> Result<PostselectionResult> {
    let amp = evolved_amplitudes(p);
    let reference = fock::coherent_state(amp.gamma_t, dim)?;
    let displaced = fock::coherent_state(amp.gamma_t + amp.alpha_t, dim)?;
    let state = displaced.scale(C64::from_polar(1.0, amp.phi_t)).sub(&reference).scale(C64::new(0.5, 0.0));
    let probability = state.norm_sqr();
    let overlap = reference.inner(&state);
    let noise = overlap.norm_sqr();
    let orthogonal = state.sub(&reference.scale(overlap));
    Ok(PostselectionResult { signal: orthogonal.norm_sqr(), noise, probability, state })
}

/// Truncation that comfortably holds the exact postselected state.
pub fn adequate_dim(p: &InteractionParams) -> usize {
    let amp = evolved_amplitudes(p);
    fock::suggested_dim(amp.gamma_t.norm() + amp.alpha_t.norm()).max(8)
}

/// Lowest-order success probability for an initial coherent state,
/// returned as (signal, noise) = (½κ²(1 − cos θ), ¼κ²|γ|² sin²θ).
pub fn postselect_probability_lowest_order(p: &InteractionParams) -> (f64, f64) {
    let k2 = p.kappa * p.kappa;
    let signal = 0.5 * k2 * (1.0 - p.theta.cos());
    let noise = 0.25 * k2 * p.gamma0.norm_sqr() * p.theta.sin().powi(2);
    (signal, noise)
}

/// Thermally averaged success probability as (signal, noise) =
/// (κ² sin²(θ/2), ¼κ² n̄ sin²θ).
pub fn thermal_postselect_probability(nbar: f64, kappa: f64, theta: f64) -> (f64, f64) {
    let k2 = kappa * kappa;
    (k2 * (0.5 * theta).sin().powi(2), 0.25 * k2 * nbar * theta.sin().powi(2))
}

/// Thermal signal-to-noise ratio, sec²(θ/2)/n̄ in closed form.
pub fn thermal_snr(nbar: f64, theta: f64) -> f64 {
    1.0 / ((0.5 * theta).cos().powi(2) * nbar)
}

/// Mean phonon number 1/(e^{ħω/k_BT} − 1); zero at T = 0.
pub fn nbar_from_temperature(temperature: f64, omega_m: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega_m / (K_B * temperature)).exp_m1()
}

/// Draw γ from the thermal Glauber–Sudarshan density e^{−|γ|²/n̄}/(πn̄).
pub fn sample_thermal_gamma<R: Rng + ?Sized>(nbar: f64, rng: &mut R) -> C64 {
    if nbar <= 0.0 {
        return C64::new(0.0, 0.0);
    }
    let normal = Normal::new(0.0, (0.5 * nbar).sqrt()).expect("finite variance");
    let re = normal.sample(rng);
    let im = normal.sample(rng);
    C64::new(re, im)
}

/// Which per-sample probability the thermal Monte Carlo averages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    /// Signal + noise of [`postselect_probability_lowest_order`].
    LowestOrder,
    /// Norm of [`postselected_state_exact`].
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

/// Thermal average of the postselection probability by sampling γ.
///
/// Samples are split into fixed-size chunks; chunk `k` draws from the ChaCha
/// stream `k` of `seed`, so results do not depend on the thread count.
pub fn thermal_monte_carlo(
    nbar: f64,
    kappa: f64,
    theta: f64,
    samples: usize,
    seed: u64,
    estimator: Estimator,
) -> Result<MonteCarloEstimate> {
    if nbar < 0.0 {
        return Err(Error::param("nbar", "must be non-negative"));
    }
    if samples < 2 {
        return Err(Error::param("samples", "need at least 2"));
    }
    let probe = InteractionParams::new(kappa, theta, C64::new(0.0, 0.0))?;
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let n = CHUNK.min(samples - k * CHUNK);
            let mut m = Moments::default();
            for _ in 0..n {
                let p = InteractionParams { gamma0: sample_thermal_gamma(nbar, &mut rng), ..probe };
                let value = match estimator {
                    Estimator::LowestOrder => {
                        let (s, q) = postselect_probability_lowest_order(&p);
                        s + q
                    }
                    Estimator::Exact => postselected_state_exact(&p, adequate_dim(&p))?.probability,
                };
                m.n += 1;
                m.sum += value;
                m.sum_sq += value * value;
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for part in parts {
        let m = part?;
        total.n += m.n;
        total.sum += m.sum;
        total.sum_sq += m.sum_sq;
    }
    let n = total.n as f64;
    let mean = total.sum / n;
    let var = ((total.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate { mean, std_error: (var / n).sqrt(), samples: total.n })
}
