//! Oracles shared by the integration tests. Nothing here calls into the
//! library's own operator constructors.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

pub fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// X = c + c† built from √n directly.
pub fn position_x(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            (j as f64).sqrt()
        } else if i == j + 1 {
            (i as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// P = i(c† − c).
pub fn momentum_p(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            C64::new(0.0, -(j as f64).sqrt())
        } else if i == j + 1 {
            C64::new(0.0, (i as f64).sqrt())
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Index of ρ_ij in column-major vec(ρ).
pub fn vec_index(dim: usize, i: usize, j: usize) -> usize {
    j * dim + i
}

/// Liouvillian tensor L_{ij,kl} with dρ_ij/dt = Σ L_{ij,kl} ρ_kl for
/// H = ħω c†c, damping γ and diffusion r, assembled element by element.
pub fn dense_liouvillian(dim: usize, omega: f64, gamma: f64, r: f64) -> DMatrix<C64> {
    let x = position_x(dim).map(|v| C64::new(v, 0.0));
    let p = momentum_p(dim);
    let x2 = &x * &x;
    let xp = &x * &p;
    let px = &p * &x;
    let h = |a: usize, b: usize| C64::new(omega * a as f64 * delta(a, b), 0.0);
    let i = C64::new(0.0, 1.0);
    let n = dim * dim;
    let mut l = DMatrix::zeros(n, n);
    for a in 0..dim {
        for b in 0..dim {
            for k in 0..dim {
                for m in 0..dim {
                    let dak = delta(a, k);
                    let dmb = delta(m, b);
                    let unitary = i * (h(m, b) * dak - h(a, k) * dmb);
                    let damping = -i
                        * (0.5 * gamma)
                        * (xp[(a, k)] * dmb + x[(a, k)] * p[(m, b)] - p[(a, k)] * x[(m, b)] - px[(m, b)] * dak);
                    let diffusion = -r * (x2[(a, k)] * dmb + x2[(m, b)] * dak - 2.0 * x[(a, k)] * x[(m, b)]);
                    l[(vec_index(dim, a, b), vec_index(dim, k, m))] = unitary + damping + diffusion;
                }
            }
        }
    }
    l
}

/// Real symmetric diffusion-only Liouvillian, −r[X,[X,·]].
pub fn diffusion_liouvillian(dim: usize, r: f64) -> DMatrix<f64> {
    dense_liouvillian(dim, 0.0, 0.0, r).map(|z| {
        assert!(z.im == 0.0);
        z.re
    })
}

/// ρ(t) = exp(Lt) ρ(0) through the eigendecomposition of a real symmetric L.
pub struct EigenPropagator {
    eig: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl EigenPropagator {
    pub fn new(l: DMatrix<f64>) -> Self {
        let sym = (&l - l.transpose()).abs().max();
        assert!(sym < 1e-12, "Liouvillian is not symmetric: {sym}");
        Self { eig: SymmetricEigen::new(l) }
    }

    pub fn evolve(&self, rho0: &DVector<C64>, t: f64) -> DVector<C64> {
        let v = self.eig.eigenvectors.map(|x| C64::new(x, 0.0));
        let coeffs = v.transpose() * rho0;
        let scaled = DVector::from_iterator(
            coeffs.len(),
            coeffs.iter().zip(self.eig.eigenvalues.iter()).map(|(c, l)| c * (l * t).exp()),
        );
        v * scaled
    }
}

/// vec of (|0⟩ + |1⟩)(⟨0| + ⟨1|)/2.
pub fn plus_vec(dim: usize) -> DVector<C64> {
    let mut v = DVector::zeros(dim * dim);
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        v[vec_index(dim, i, j)] = C64::new(0.5, 0.0);
    }
    v
}

/// Unscaled I₀ from its power series Σ (x²/4)^k/(k!)².
pub fn bessel_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}
