mod common;

use common::{dense_liouvillian, diffusion_liouvillian, plus_vec, rel, vec_index, EigenPropagator};
use nalgebra::{DMatrix, DVector};
use optomech::decoherence::eid_timescale;
use optomech::devices::{builtin, DeviceParams};
use optomech::dynamics::{
    crossing_time, eid_generator, integrate, localized_generator, step_halving_ratio, visibility, visibility_curve,
    Channel, DensityMatrix, EvolutionSpec, Generator, DEFAULT_DIM,
};
use optomech::physconst::{HBAR, K_B};
use optomech::C64;
use proptest::prelude::*;

fn random_hermitian(dim: usize, entries: &[(f64, f64)]) -> DMatrix<C64> {
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = entries[(i * dim + j) % entries.len()];
        C64::new(re, im)
    });
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn as_vec(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

fn max_abs(m: impl IntoIterator<Item = C64>) -> f64 {
    m.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn diffusion_term_matches_liouvillian_tensor() {
    let dim = 8;
    let r = 0.37;
    let g = Generator::oscillator(0.0, 0.0, r, dim).unwrap();
    let rho = DMatrix::from_fn(
        dim,
        dim,
        |i, j| if i == j { C64::new(1.0 / (i + 1) as f64, 0.0) } else { C64::new(0.0, 0.0) },
    );
    let direct = g.diffusion_term(&rho);
    let oracle = diffusion_liouvillian(dim, r).map(|v| C64::new(v, 0.0)) * as_vec(&rho);
    assert!(max_abs(as_vec(&direct).iter().zip(oracle.iter()).map(|(a, b)| a - b)) < 1e-12);
}

#[test]
fn full_generator_matches_liouvillian_tensor() {
    let dim = 7;
    let (omega, gamma, r) = (1.3, 0.21, 0.45);
    let g = Generator::oscillator(omega, gamma, r, dim).unwrap();
    let rho = random_hermitian(dim, &[(0.3, 0.1), (-0.2, 0.5), (0.7, -0.4), (0.05, 0.0), (-0.6, 0.2)]);
    let oracle = dense_liouvillian(dim, omega, gamma, r) * as_vec(&rho);
    let direct = as_vec(&g.apply(&rho));
    assert!(max_abs(direct.iter().zip(oracle.iter()).map(|(a, b)| a - b)) < 1e-12);

    // each term separately
    let sep = as_vec(&(g.unitary_term(&rho) + g.damping_term(&rho) + g.diffusion_term(&rho)));
    assert!(max_abs(sep.iter().zip(direct.iter()).map(|(a, b)| a - b)) < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generators_are_linear(
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 25),
        other in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 25),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let device = builtin("proposed2").unwrap();
        let eid = eid_generator(&device, 1e-3, 5).unwrap();
        let loc = localized_generator(1e30, device.x0(), device.omega_m(), 5).unwrap();
        let r1 = random_hermitian(5, &entries);
        let r2 = random_hermitian(5, &other);
        for g in [&eid, &loc] {
            let (ca, cb) = (C64::new(a, 0.0), C64::new(b, 0.0));
            let lhs = g.apply(&(&r1 * ca + &r2 * cb));
            let rhs = g.apply(&r1) * ca + g.apply(&r2) * cb;
            let scale = g.fastest_rate() * 10.0;
            prop_assert!(max_abs((lhs - rhs).iter().copied()) <= 1e-12 * scale);
        }
    }
}

#[test]
fn localized_visibility_matches_eigendecomposition() {
    let dim = DEFAULT_DIM;
    let x0 = 1e-13;
    let lambda = 1e26; // Λx₀² = 1 /s
    let r = lambda * x0 * x0;
    let g = localized_generator(lambda, x0, 1.0, dim).unwrap().without_hamiltonian();
    let rho0 = DensityMatrix::plus_state(dim).unwrap();
    let spec = EvolutionSpec::new(1.0, 1e-3).record_every(100);
    let traj = integrate(&rho0, &g, &spec).unwrap();

    let oracle = EigenPropagator::new(diffusion_liouvillian(dim, r));
    let v0 = plus_vec(dim);
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        let exact = oracle.evolve(&v0, *t);
        let v_exact = 2.0 * exact[vec_index(dim, 0, 1)].norm();
        assert!((visibility(rho) - v_exact).abs() < 1e-8, "t = {t}: {} vs {v_exact}", visibility(rho));
    }
    let v_final = visibility(traj.final_state());
    assert!(v_final < 0.5, "window covers the decay: {v_final}");
}

#[test]
fn visibility_curve_matches_oracle_for_slow_device() {
    // f_m = 1 μHz makes the Hamiltonian negligible over the window.
    let mut device = builtin("proposed1").unwrap();
    device.f_m = 1e-6;
    let x0 = device.x0();
    let r = 2.0;
    let lambda = r / (x0 * x0);
    let times: Vec<f64> = (1..=10).map(|k| 0.05 * k as f64).collect();
    let table =
        visibility_curve(&device, &[Channel::Localized { label: "loc".into(), lambda }], &times, DEFAULT_DIM).unwrap();
    let oracle = EigenPropagator::new(diffusion_liouvillian(DEFAULT_DIM, r));
    for (t, v) in times.iter().zip(&table.columns[0].values) {
        let exact = 2.0 * oracle.evolve(&plus_vec(DEFAULT_DIM), *t)[vec_index(DEFAULT_DIM, 0, 1)].norm();
        assert!(rel(*v, exact) < 0.01, "t = {t}: {v} vs {exact}");
    }
}

#[test]
fn diffusion_coefficients_are_interchangeable() {
    let device = builtin("proposed1").unwrap();
    let t_env = 1e-3;
    let gamma_m = device.omega_m() / device.q_m;
    let d = 2.0 * device.mass * gamma_m * K_B * t_env;
    let eid = eid_generator(&device, t_env, DEFAULT_DIM).unwrap().with_damping(0.0);
    let loc = localized_generator(d / (HBAR * HBAR), device.x0(), device.omega_m(), DEFAULT_DIM).unwrap();
    let rho0 = DensityMatrix::plus_state(DEFAULT_DIM).unwrap();
    let spec = EvolutionSpec::resolved(2e-5, &eid).record_every(500);
    let a = integrate(&rho0, &eid, &spec).unwrap();
    let b = integrate(&rho0, &loc, &spec).unwrap();
    assert_eq!(a.times, b.times);
    for (x, y) in a.states.iter().zip(&b.states) {
        assert!(x.max_abs_diff(y) <= 1e-10);
    }
}

#[test]
fn two_site_coherence_decays_at_lambda_dx_squared() {
    // Two position eigenstates x₁, x₂ with H = 0; ρ₁₂ ∝ exp(−Λ(x₁−x₂)²t).
    let a_loc = 100e-9;
    let gamma = 1e4;
    let lambda = gamma / (4.0 * a_loc * a_loc);
    let (x1, x2) = (0.0, 0.1 * 2.0 * a_loc);
    let scale = x2 - x1;
    let x = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(x1 / scale, 0.0), C64::new(x2 / scale, 0.0)]));
    let zero = DMatrix::zeros(2, 2);
    let g = Generator::custom(zero.clone(), x, zero, 0.0, lambda * scale * scale);

    let rate = lambda * (x1 - x2).powi(2);
    let rho0 = DensityMatrix::new(DMatrix::from_element(2, 2, C64::new(0.5, 0.0))).unwrap();
    let spec = EvolutionSpec::resolved(1.0 / rate, &g).record_every(10);
    let traj = integrate(&rho0, &g, &spec).unwrap();
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        let expected = 0.5 * (-rate * t).exp();
        assert!(rel(rho.get(0, 1).re, expected) < 0.01);
    }

    // the small-separation form is within 1% of the Gaussian rate here
    let dx = x2 - x1;
    let exact = gamma * (1.0 - (-dx * dx / (4.0 * a_loc * a_loc)).exp());
    assert!(rel(rate, exact) < 0.01, "{rate} vs {exact}");
}

#[test]
fn rk4_is_fourth_order() {
    let device = builtin("proposed1").unwrap();
    let g = eid_generator(&device, 1e-3, DEFAULT_DIM).unwrap();
    let rho0 = DensityMatrix::plus_state(DEFAULT_DIM).unwrap();
    let dt = 0.01 / g.fastest_rate();
    let ratio = step_halving_ratio(&rho0, &g, 2e-6, dt).unwrap();
    assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
}

#[test]
fn eid_run_respects_step_invariants() {
    let device = builtin("proposed1").unwrap();
    let t_env = 1e-3;
    let tau = eid_timescale(device.q_m, t_env);
    let times: Vec<f64> = (1..=20).map(|k| 0.1 * tau * k as f64).collect();
    let table = visibility_curve(&device, &[Channel::Eid { t_env }], &times, DEFAULT_DIM).unwrap();
    let s = table.columns[0].stats;
    assert!(s.max_step_trace_drift <= 1e-9, "{}", s.max_step_trace_drift);
    assert!(s.max_hermiticity_defect <= 1e-10, "{}", s.max_hermiticity_defect);
    assert!(s.min_eigenvalue >= -1e-8);
    for v in &table.columns[0].values {
        assert!((0.0..=1.0).contains(v));
    }
}

#[test]
fn eid_visibility_time_tracks_eid_timescale() {
    let device = builtin("proposed1").unwrap();
    let mut e_fold = Vec::new();
    for t_env in [1e-3, 1e-4] {
        let tau = eid_timescale(device.q_m, t_env);
        let times: Vec<f64> = (1..=100).map(|k| 0.02 * tau * k as f64).collect();
        let table = visibility_curve(&device, &[Channel::Eid { t_env }], &times, DEFAULT_DIM).unwrap();
        let t = crossing_time(&times, &table.columns[0].values, (-1.0f64).exp()).expect("visibility reaches 1/e");
        println!("T_env = {t_env} K: 1/e at {t:.4e} s, tau_EID = {tau:.4e} s, ratio {:.4}", t / tau);
        assert!(t / tau > 1.0 / 3.0 && t / tau < 3.0);
        e_fold.push(t);
    }
    let ratio = e_fold[1] / e_fold[0];
    assert!((ratio / 10.0 - 1.0).abs() < 0.1, "tenfold cooler bath: ratio {ratio}");
}

#[test]
fn eid_full_decay_over_five_timescales() {
    let device = builtin("proposed1").unwrap();
    let t_env = 1e-3;
    let t_max = 5.0 * eid_timescale(device.q_m, t_env);
    let table = visibility_curve(&device, &[Channel::None, Channel::Eid { t_env }], &[t_max], DEFAULT_DIM).unwrap();
    assert!((table.columns[0].values[0] - 1.0).abs() < 1e-9);
    assert!(table.columns[1].values[0] < 0.05);
}

#[test]
fn thermal_steady_state_equipartition() {
    // low-Q device with n_th ≈ 2 so that the thermal state fits in 30 levels
    let device = DeviceParams {
        name: "lowq".into(),
        mass: 1e-12,
        f_m: 1e3,
        cavity_length: 0.05,
        finesse: 1e4,
        q_m: 10.0,
        radius: None,
        thickness: None,
        wavelength: 1.064e-6,
        material: "tantalum".into(),
    };
    let omega = device.omega_m();
    let t_env = 2.0 * HBAR * omega / K_B;
    let dim = 30;
    let g = eid_generator(&device, t_env, dim).unwrap();
    let mut start = DMatrix::zeros(dim, dim);
    start[(1, 1)] = C64::new(1.0, 0.0);
    let rho0 = DensityMatrix::new(start).unwrap();
    // Caldeira–Leggett is not completely positive; small negative eigenvalues
    // are expected this far from the high-temperature limit.
    let spec = EvolutionSpec {
        negativity_tolerance: 1e-2,
        record_every: usize::MAX,
        ..EvolutionSpec::resolved(15.0 * device.q_m / omega, &g)
    };
    let traj = integrate(&rho0, &g, &spec).unwrap();
    let rho = traj.final_state();
    let x0 = device.x0();
    let x = common::position_x(dim).map(|v| C64::new(v * x0, 0.0));
    let x2 = (rho.entries() * (&x * &x)).trace().re;
    let expected = K_B * t_env / (device.mass * omega * omega);
    assert!(rel(x2, expected) < 0.05, "{x2:e} vs {expected:e}");
    assert!(traj.stats.max_top_population < 1e-3);
}

#[test]
fn visibility_ignores_global_phase() {
    let rho = DensityMatrix::plus_state(6).unwrap();
    let phased = DensityMatrix::from_matrix_unchecked(rho.entries() * C64::from_polar(1.0, 0.7));
    assert!((visibility(&rho) - visibility(&phased)).abs() < 1e-15);
}

#[test]
fn no_channels_and_no_decoherence() {
    let device = builtin("proposed2").unwrap();
    let times = [1e-6, 1e-5, 1e-4];
    let table = visibility_curve(&device, &[Channel::None], &times, DEFAULT_DIM).unwrap();
    for v in &table.columns[0].values {
        assert!((v - 1.0).abs() < 1e-9);
    }
}
