//! Master-equation integration on the truncated number basis.
//!
//! Operators are kept dimensionless: X = c + c†, P = i(c† − c), so that
//! x̂ = x₀X and p̂ = (ħ/2x₀)P. In these units a generator reads
//!
//! dρ/dt = i[ρ, H/ħ] − i(γ_m/2)[X, {P, ρ}] − r_d[X, [X, ρ]]
//!
//! with r_d = Dx₀²/ħ² for the thermal bath and r_d = Λx₀² for position
//! localization. Time stepping is fixed-step RK4 without renormalization;
//! trace drift and Hermiticity are measured, not corrected.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::devices::DeviceParams;
use crate::fock::{self, StateVector};
use crate::physconst::{HBAR, K_B};
use crate::{Error, Result, C64};

/// Truncation used for |0⟩/|1⟩ superposition dynamics.
pub const DEFAULT_DIM: usize = 10;

/// Steps per fastest rate: dt ≤ DT_FACTOR / rate.
pub const DT_FACTOR: f64 = 0.01;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validated density matrix: Hermitian to 1e-10, unit trace to 1e-9,
    /// eigenvalues above −1e-8.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(entries);
        let herm = rho.hermiticity_defect();
        if herm > 1e-10 {
            return Err(Error::param("rho", format!("not Hermitian (defect {herm:e})")));
        }
        let tr = rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::param("rho", format!("trace {tr} differs from 1")));
        }
        let min = rho.min_eigenvalue();
        if min < -1e-8 {
            return Err(Error::param("rho", format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn from_matrix_unchecked(entries: DMatrix<C64>) -> Self {
        assert!(entries.is_square(), "density matrix must be square");
        Self { entries }
    }

    /// |ψ⟩⟨ψ| for a normalized state.
    pub fn pure(psi: &StateVector) -> Self {
        let v = psi.amps();
        Self { entries: v * v.adjoint() }
    }

    /// (|0⟩ + |1⟩)/√2 projector.
    pub fn plus_state(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[0] = C64::new(h, 0.0);
        amps[1] = C64::new(h, 0.0);
        Ok(Self::pure(&StateVector::from_amps(amps)?))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let diff = &self.entries - self.entries.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Population of level n.
    pub fn population(&self, n: usize) -> f64 {
        self.entries[(n, n)].re
    }

    /// ⟨ψ|ρ|ψ⟩.
    pub fn fidelity_with_pure(&self, psi: &StateVector) -> f64 {
        let v = psi.amps();
        (v.adjoint() * &self.entries * v)[(0, 0)].re
    }

    /// Largest elementwise difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.entries - &other.entries).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> DensityMatrix {
        Self { entries: &self.entries * s }
    }

    pub fn add(&self, other: &DensityMatrix) -> DensityMatrix {
        Self { entries: &self.entries + &other.entries }
    }
}

/// Interference visibility 2|⟨0|ρ|1⟩| of the |0⟩/|1⟩ superposition.
pub fn visibility(rho: &DensityMatrix) -> f64 {
    2.0 * rho.get(0, 1).norm()
}

/// Right-hand side of a quantum Brownian motion / localization master equation.
#[derive(Clone, Debug)]
pub struct Generator {
    /// H/ħ, rad/s.
    hamiltonian: DMatrix<C64>,
    x: DMatrix<C64>,
    p: DMatrix<C64>,
    x2: DMatrix<C64>,
    /// γ_m, 1/s.
    damping: f64,
    /// r_d, 1/s.
    diffusion: f64,
    /// Characteristic frequency of H, rad/s.
    frequency: f64,
}

impl Generator {
    /// Generator from explicit dimensionless operators. `hamiltonian` is H/ħ.
    ///
    /// The step-size bound compares dt with `diffusion` itself, so scale `x`
    /// to entries of order one.
    pub fn custom(hamiltonian: DMatrix<C64>, x: DMatrix<C64>, p: DMatrix<C64>, damping: f64, diffusion: f64) -> Self {
        let x2 = &x * &x;
        let herm = (&hamiltonian + hamiltonian.adjoint()) * C64::new(0.5, 0.0);
        let eig = herm.symmetric_eigenvalues();
        let frequency = eig.max() - eig.min();
        Self { hamiltonian, x, p, x2, damping, diffusion, frequency }
    }

    /// Oscillator of angular frequency `omega` with the given damping and
    /// diffusion rates on `dim` levels.
    pub fn oscillator(omega: f64, damping: f64, diffusion: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        let c = fock::annihilation(dim)?.into_matrix();
        let cd = c.adjoint();
        let h = fock::number(dim)?.into_matrix() * C64::new(omega, 0.0);
        let x = &c + &cd;
        let p = (&cd - &c) * I;
        let mut g = Self::custom(h, x, p, damping, diffusion);
        g.frequency = omega.abs();
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }

    pub fn with_damping(mut self, damping: f64) -> Self {
        self.damping = damping;
        self
    }

    pub fn with_diffusion(mut self, diffusion: f64) -> Self {
        self.diffusion = diffusion;
        self
    }

    /// Same dissipators with no Hamiltonian.
    pub fn without_hamiltonian(mut self) -> Self {
        self.hamiltonian.fill(C64::new(0.0, 0.0));
        self.frequency = 0.0;
        self
    }

    /// Largest of the oscillation frequency, γ_m and r_d. For a custom
    /// Hamiltonian the frequency is its spectral spread.
    pub fn fastest_rate(&self) -> f64 {
        self.frequency.max(self.damping).max(self.diffusion)
    }

    /// The generator as a sparse matrix acting on column-major vec(ρ).
    pub fn superoperator(&self) -> Superoperator {
        let d = self.dim();
        let n = d * d;
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n];
        let mut basis = DMatrix::zeros(d, d);
        for col in 0..n {
            basis[(col % d, col / d)] = C64::new(1.0, 0.0);
            let image = self.apply(&basis);
            for (row, v) in image.as_slice().iter().enumerate() {
                if *v != C64::new(0.0, 0.0) {
                    rows[row].push((col, *v));
                }
            }
            basis[(col % d, col / d)] = C64::new(0.0, 0.0);
        }
        let mut row_start = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for r in rows {
            for (c, v) in r {
                cols.push(c);
                vals.push(v);
            }
            row_start.push(cols.len());
        }
        Superoperator { dim: d, row_start, cols, vals }
    }

    /// i[ρ, H/ħ].
    pub fn unitary_term(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        (rho * &self.hamiltonian - &self.hamiltonian * rho) * I
    }

    /// −i(γ_m/2)[X, {P, ρ}].
    pub fn damping_term(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        if self.damping == 0.0 {
            return DMatrix::zeros(rho.nrows(), rho.ncols());
        }
        let anti = &self.p * rho + rho * &self.p;
        let comm = &self.x * &anti - &anti * &self.x;
        comm * (-I * (0.5 * self.damping))
    }

    /// −r_d[X, [X, ρ]].
    pub fn diffusion_term(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        if self.diffusion == 0.0 {
            return DMatrix::zeros(rho.nrows(), rho.ncols());
        }
        let xrx = &self.x * rho * &self.x;
        let double = &self.x2 * rho + rho * &self.x2 - xrx * C64::new(2.0, 0.0);
        double * C64::new(-self.diffusion, 0.0)
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        self.unitary_term(rho) + self.damping_term(rho) + self.diffusion_term(rho)
    }
}

/// Compressed-row form of a generator on vec(ρ), column-major.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Superoperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nonzeros(&self) -> usize {
        self.vals.len()
    }

    /// Dense d²×d² matrix.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dim * self.dim;
        let mut m = DMatrix::zeros(n, n);
        for r in 0..n {
            for k in self.row_start[r]..self.row_start[r + 1] {
                m[(r, self.cols[k])] = self.vals[k];
            }
        }
        m
    }

    fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_start[r]..self.row_start[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }
}

/// Caldeira–Leggett generator with H = ħω_m c†c, γ_m = ω_m/Q_m and
/// D = 2mγ_m k_B T_env.
pub fn eid_generator(device: &DeviceParams, t_env: f64, dim: usize) -> Result<Generator> {
    if dim < 3 {
        return Err(Error::InvalidDimension { dim, min: 3 });
    }
    if !(t_env > 0.0) {
        return Err(Error::param("t_env", format!("must be positive, got {t_env}")));
    }
    let omega = device.omega_m();
    let gamma_m = omega / device.q_m;
    let d = 2.0 * device.mass * gamma_m * K_B * t_env;
    let x0 = device.x0();
    Generator::oscillator(omega, gamma_m, d * x0 * x0 / (HBAR * HBAR), dim)
}

/// Position-localization generator with Γ(x) ≈ Λx² and H = ħω_m c†c.
pub fn localized_generator(lambda: f64, x0: f64, omega_m: f64, dim: usize) -> Result<Generator> {
    if !(lambda >= 0.0) {
        return Err(Error::param("lambda", format!("must be non-negative, got {lambda}")));
    }
    Generator::oscillator(omega_m, 0.0, lambda * x0 * x0, dim)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionSpec {
    pub t_final: f64,
    pub dt: f64,
    /// Record every n-th step (the final state is always recorded).
    pub record_every: usize,
    /// Allowed |Tr ρ(t) − Tr ρ(0)|.
    pub trace_tolerance: f64,
    /// Allowed magnitude of negative eigenvalues at recorded states.
    pub negativity_tolerance: f64,
    pub max_steps: usize,
}

impl EvolutionSpec {
    pub fn new(t_final: f64, dt: f64) -> Self {
        Self { t_final, dt, record_every: 1, trace_tolerance: 1e-6, negativity_tolerance: 1e-8, max_steps: 50_000_000 }
    }

    /// Step size 0.01/rate for `generator`.
    pub fn resolved(t_final: f64, generator: &Generator) -> Self {
        Self::new(t_final, DT_FACTOR / generator.fastest_rate().max(f64::MIN_POSITIVE))
    }

    pub fn record_every(mut self, n: usize) -> Self {
        self.record_every = n.max(1);
        self
    }

    fn validate(&self, generator: &Generator) -> Result<usize> {
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::param("t_final", "must be finite and non-negative"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::param("dt", "must be positive"));
        }
        let rate = generator.fastest_rate();
        if self.dt * rate > DT_FACTOR * (1.0 + 1e-9) {
            return Err(Error::param(
                "dt",
                format!("{:e} s does not resolve rate {rate:e}/s (need dt <= {DT_FACTOR}/rate)", self.dt),
            ));
        }
        let steps = (self.t_final / self.dt - 1e-9).ceil().max(0.0) as usize;
        if steps > self.max_steps {
            return Err(Error::param("t_final", format!("needs {steps} steps, limit is {}", self.max_steps)));
        }
        Ok(steps)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IntegrationStats {
    pub steps: usize,
    /// Largest single-step change of the trace.
    pub max_step_trace_drift: f64,
    /// |Tr ρ(t_final) − Tr ρ(0)|.
    pub total_trace_drift: f64,
    pub max_hermiticity_defect: f64,
    /// Smallest eigenvalue seen at recorded states.
    pub min_eigenvalue: f64,
    /// Largest population of the top retained level.
    pub max_top_population: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub stats: IntegrationStats,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// RK4 stepper that accumulates diagnostics.
struct Stepper {
    op: Superoperator,
    rho: Vec<C64>,
    k: [Vec<C64>; 4],
    scratch: Vec<C64>,
    t: f64,
    trace0: C64,
    stats: IntegrationStats,
    trace_tolerance: f64,
}

impl Stepper {
    fn new(generator: &Generator, rho0: &DensityMatrix, trace_tolerance: f64) -> Self {
        let rho = rho0.entries.as_slice().to_vec();
        let n = rho.len();
        let zeros = || vec![C64::new(0.0, 0.0); n];
        Self {
            op: generator.superoperator(),
            trace0: rho0.trace(),
            rho,
            k: [zeros(), zeros(), zeros(), zeros()],
            scratch: zeros(),
            t: 0.0,
            stats: IntegrationStats {
                min_eigenvalue: rho0.min_eigenvalue(),
                max_top_population: rho0.population(rho0.dim() - 1),
                ..Default::default()
            },
            trace_tolerance,
        }
    }

    fn step(&mut self, dt: f64) -> Result<()> {
        let [k1, k2, k3, k4] = &mut self.k;
        let stage = |from: &[C64], h: f64, rho: &[C64], scratch: &mut Vec<C64>| {
            for ((s, r), f) in scratch.iter_mut().zip(rho).zip(from) {
                *s = r + f * h;
            }
        };
        self.op.apply_into(&self.rho, k1);
        stage(k1, 0.5 * dt, &self.rho, &mut self.scratch);
        self.op.apply_into(&self.scratch, k2);
        stage(k2, 0.5 * dt, &self.rho, &mut self.scratch);
        self.op.apply_into(&self.scratch, k3);
        stage(k3, dt, &self.rho, &mut self.scratch);
        self.op.apply_into(&self.scratch, k4);

        let d = self.op.dim;
        let trace = |rho: &[C64]| -> C64 { (0..d).map(|i| rho[i * d + i]).sum() };
        let before = trace(&self.rho);
        let w = dt / 6.0;
        for i in 0..self.rho.len() {
            self.rho[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
        self.t += dt;

        let after = trace(&self.rho);
        let s = &mut self.stats;
        s.steps += 1;
        s.max_step_trace_drift = s.max_step_trace_drift.max((after - before).norm());
        s.total_trace_drift = (after - self.trace0).norm();
        s.max_top_population = s.max_top_population.max(self.rho[d * d - 1].re);
        let mut herm = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                herm = herm.max((self.rho[j * d + i] - self.rho[i * d + j].conj()).norm());
            }
        }
        s.max_hermiticity_defect = s.max_hermiticity_defect.max(herm);
        if !after.re.is_finite() {
            return Err(Error::Integrator { t: self.t, reason: "state became non-finite".into() });
        }
        if s.total_trace_drift > self.trace_tolerance {
            return Err(Error::Integrator {
                t: self.t,
                reason: format!("trace drift {:e} exceeds {:e}", s.total_trace_drift, self.trace_tolerance),
            });
        }
        Ok(())
    }

    fn snapshot(&mut self, negativity_tolerance: f64) -> Result<DensityMatrix> {
        let d = self.op.dim;
        let rho = DensityMatrix::from_matrix_unchecked(DMatrix::from_column_slice(d, d, &self.rho));
        let min = rho.min_eigenvalue();
        self.stats.min_eigenvalue = self.stats.min_eigenvalue.min(min);
        if min < -negativity_tolerance {
            return Err(Error::Integrator {
                t: self.t,
                reason: format!("eigenvalue {min:e} below -{negativity_tolerance:e}"),
            });
        }
        Ok(rho)
    }
}

/// Integrate `generator` from `rho0` over [0, spec.t_final].
pub fn integrate(rho0: &DensityMatrix, generator: &Generator, spec: &EvolutionSpec) -> Result<Trajectory> {
    if rho0.dim() != generator.dim() {
        return Err(Error::InvalidDimension { dim: rho0.dim(), min: generator.dim() });
    }
    let steps = spec.validate(generator)?;
    let dt = if steps == 0 { 0.0 } else { spec.t_final / steps as f64 };
    let mut stepper = Stepper::new(generator, rho0, spec.trace_tolerance);
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    for k in 1..=steps {
        stepper.step(dt)?;
        if k % spec.record_every == 0 || k == steps {
            times.push(k as f64 * dt);
            states.push(stepper.snapshot(spec.negativity_tolerance)?);
        }
    }
    Ok(Trajectory { times, states, stats: stepper.stats })
}

/// Ratio ‖ρ_dt − ρ_{dt/2}‖ / ‖ρ_{dt/2} − ρ_{dt/4}‖ of final states; about 16
/// for a fourth-order method.
pub fn step_halving_ratio(rho0: &DensityMatrix, generator: &Generator, t_final: f64, dt: f64) -> Result<f64> {
    let run = |h: f64| -> Result<DensityMatrix> {
        let spec = EvolutionSpec { record_every: usize::MAX, ..EvolutionSpec::new(t_final, h) };
        Ok(integrate(rho0, generator, &spec)?.final_state().clone())
    };
    let coarse = run(dt)?;
    let mid = run(0.5 * dt)?;
    let fine = run(0.25 * dt)?;
    Ok(coarse.max_abs_diff(&mid) / mid.max_abs_diff(&fine))
}

/// Decoherence channel acting on the delayed superposition.
#[derive(Clone, Debug, PartialEq)]
pub enum Channel {
    /// Free evolution only.
    None,
    /// Thermal bath at `t_env` kelvin.
    Eid { t_env: f64 },
    /// Position localization with parameter `lambda` (Hz/m²).
    Localized { label: String, lambda: f64 },
}

impl Channel {
    pub fn label(&self) -> String {
        match self {
            Channel::None => "none".into(),
            Channel::Eid { .. } => "eid".into(),
            Channel::Localized { label, .. } => label.clone(),
        }
    }

    pub fn generator(&self, device: &DeviceParams, dim: usize) -> Result<Generator> {
        match self {
            Channel::None => Generator::oscillator(device.omega_m(), 0.0, 0.0, dim),
            Channel::Eid { t_env } => eid_generator(device, *t_env, dim),
            Channel::Localized { lambda, .. } => localized_generator(*lambda, device.x0(), device.omega_m(), dim),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VisibilityColumn {
    pub label: String,
    pub values: Vec<f64>,
    pub stats: IntegrationStats,
}

#[derive(Clone, Debug)]
pub struct VisibilityTable {
    pub times: Vec<f64>,
    pub columns: Vec<VisibilityColumn>,
}

fn visibility_column(
    device: &DeviceParams,
    channel: &Channel,
    t_grid: &[f64],
    dim: usize,
    max_steps: usize,
) -> Result<VisibilityColumn> {
    let generator = channel.generator(device, dim)?;
    let dt_max = DT_FACTOR / generator.fastest_rate().max(f64::MIN_POSITIVE);
    let planned: f64 = t_grid.last().map_or(0.0, |t| t / dt_max);
    if planned > max_steps as f64 {
        return Err(Error::param(
            "t_grid",
            format!("channel `{}` needs about {planned:.3e} steps, limit is {max_steps}", channel.label()),
        ));
    }
    let rho0 = DensityMatrix::plus_state(dim)?;
    let mut stepper = Stepper::new(&generator, &rho0, 1e-6);
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let span = t - stepper.t;
        if span > 0.0 {
            let n = (span / dt_max).ceil() as usize;
            let dt = span / n as f64;
            for _ in 0..n {
                stepper.step(dt)?;
            }
            stepper.t = t;
        }
        values.push(visibility(&stepper.snapshot(1e-8)?));
    }
    Ok(VisibilityColumn { label: channel.label(), values, stats: stepper.stats })
}

/// Visibility of the (|0⟩ + |1⟩)/√2 superposition at each time in `t_grid`,
/// one column per channel. Channels run in parallel; column order follows
/// `channels`.
pub fn visibility_curve(
    device: &DeviceParams,
    channels: &[Channel],
    t_grid: &[f64],
    dim: usize,
) -> Result<VisibilityTable> {
    if t_grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::param("t_grid", "times must be finite and non-negative"));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("t_grid", "times must be sorted"));
    }
    let columns = channels
        .par_iter()
        .map(|c| visibility_column(device, c, t_grid, dim, 50_000_000))
        .collect::<Result<Vec<_>>>()?;
    Ok(VisibilityTable { times: t_grid.to_vec(), columns })
}

/// Time at which a sampled visibility first drops to `level`, interpolated
/// linearly between grid points.
pub fn crossing_time(times: &[f64], values: &[f64], level: f64) -> Option<f64> {
    times.windows(2).zip(values.windows(2)).find_map(|(t, v)| {
        (v[0] >= level && v[1] < level).then(|| t[0] + (v[0] - level) / (v[0] - v[1]) * (t[1] - t[0]))
    })
}
