//! Truncated number-basis linear algebra for a single mechanical mode.
//!
//! States live on |0⟩..|dim−1⟩. Constructors for coherent-type states refuse
//! to build when more than [`TAIL_LIMIT`] of the population would fall above
//! the truncation, so truncation error never enters silently.

use std::ops::Mul;

use nalgebra::{DMatrix, DVector};

use crate::physconst::HBAR;
use crate::{Error, Result, C64};

/// Largest population allowed above level dim−1 for coherent-type states.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Rule-of-thumb truncation for a coherent amplitude of modulus `r`.
pub fn suggested_dim(r: f64) -> usize {
    (r * r + 8.0 * r + 10.0).ceil() as usize
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    pub fn from_amps(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        Ok(Self { amps: DVector::from_vec(amps) })
    }

    /// Number state |n⟩.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidDimension { dim, min: n + 1 });
        }
        let mut amps = DVector::zeros(dim);
        amps[n] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amp(&self, n: usize) -> C64 {
        self.amps[n]
    }

    /// ⟨ψ|ψ⟩.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amps.dotc(&other.amps)
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm_sqr().sqrt();
        Self { amps: self.amps.unscale(n) }
    }

    /// |⟨self|other⟩|² for normalized inputs.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn scale(&self, s: C64) -> StateVector {
        Self { amps: &self.amps * s }
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        Self { amps: &self.amps + &other.amps }
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        Self { amps: &self.amps - &other.amps }
    }

    /// Population of the highest retained level.
    pub fn top_population(&self) -> f64 {
        self.amps[self.dim() - 1].norm_sqr()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn from_matrix(entries: DMatrix<C64>) -> Self {
        assert!(entries.is_square(), "operator must be square");
        Self { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        Self { entries: self.entries.adjoint() }
    }

    pub fn scale(&self, s: C64) -> OperatorMatrix {
        Self { entries: &self.entries * s }
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        Self { entries: &self.entries + &other.entries }
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        Self { entries: &self.entries - &other.entries }
    }

    /// [self, other].
    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        Self { entries: &self.entries * &other.entries - &other.entries * &self.entries }
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        assert_eq!(self.dim(), psi.dim(), "dimension mismatch");
        StateVector { amps: &self.entries * &psi.amps }
    }

    /// ⟨ψ|A|ψ⟩.
    pub fn expectation(&self, psi: &StateVector) -> C64 {
        psi.inner(&self.apply(psi))
    }

    /// Largest elementwise deviation from `other` on the leading `block`×`block` corner.
    pub fn max_deviation_in_block(&self, other: &OperatorMatrix, block: usize) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..block {
            for j in 0..block {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { entries: &self.entries * &rhs.entries }
    }
}

impl Mul<&StateVector> for &OperatorMatrix {
    type Output = StateVector;

    fn mul(self, rhs: &StateVector) -> StateVector {
        self.apply(rhs)
    }
}

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min {
        Err(Error::InvalidDimension { dim, min })
    } else {
        Ok(())
    }
}

/// Annihilation operator c with ⟨n−1|c|n⟩ = √n.
pub fn annihilation(dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim, 2)?;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(OperatorMatrix { entries: m })
}

pub fn creation(dim: usize) -> Result<OperatorMatrix> {
    Ok(annihilation(dim)?.adjoint())
}

/// c†c.
pub fn number(dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim, 1)?;
    let diag = DVector::from_iterator(dim, (0..dim).map(|n| C64::new(n as f64, 0.0)));
    Ok(OperatorMatrix { entries: DMatrix::from_diagonal(&diag) })
}

fn checked_tail(amps: DVector<C64>) -> Result<StateVector> {
    let dim = amps.len();
    let captured: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let tail = 1.0 - captured;
    if tail > TAIL_LIMIT {
        return Err(Error::Truncation { dim, tail, limit: TAIL_LIMIT });
    }
    Ok(StateVector { amps })
}

/// Coherent state |γ⟩ = e^{−|γ|²/2} Σ γⁿ/√n! |n⟩.
pub fn coherent_state(gamma: C64, dim: usize) -> Result<StateVector> {
    check_dim(dim, 1)?;
    let mut amps = DVector::zeros(dim);
    amps[0] = C64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    for n in 1..dim {
        amps[n] = amps[n - 1] * gamma / (n as f64).sqrt();
    }
    checked_tail(amps)
}

/// Single-quantum-added coherent state c†|γ⟩/√(|γ|²+1).
pub fn added_coherent_state(gamma: C64, dim: usize) -> Result<StateVector> {
    check_dim(dim, 2)?;
    let r2 = gamma.norm_sqr();
    let mut amps = DVector::zeros(dim);
    // running γ^{n−1}/√((n−1)!)
    let mut term = C64::new((-0.5 * r2).exp() / (r2 + 1.0).sqrt(), 0.0);
    for n in 1..dim {
        if n > 1 {
            term = term * gamma / ((n - 1) as f64).sqrt();
        }
        amps[n] = term * (n as f64).sqrt();
    }
    checked_tail(amps)
}

/// Displacement operator D(η) = exp(η c† − η* c).
///
/// The truncated generator is anti-Hermitian, so the result is exactly
/// unitary; agreement with the infinite-dimensional operator holds on the
/// well-populated interior block.
pub fn displacement(eta: C64, dim: usize) -> Result<OperatorMatrix> {
    let c = annihilation(dim)?;
    let cd = c.adjoint();
    let generator = &cd.entries * eta - &c.entries * eta.conj();
    Ok(OperatorMatrix { entries: generator.exp() })
}

/// x̂ = x₀(c + c†), with x₀ the zero-point spread.
pub fn position_operator(dim: usize, x0: f64) -> Result<OperatorMatrix> {
    if !(x0 > 0.0) {
        return Err(Error::param("x0", "must be positive"));
    }
    let c = annihilation(dim)?;
    Ok(c.add(&c.adjoint()).scale(C64::new(x0, 0.0)))
}

/// p̂ = (ħ/(2x₀)) i(c† − c), conjugate to [`position_operator`].
pub fn momentum_operator(dim: usize, x0: f64) -> Result<OperatorMatrix> {
    if !(x0 > 0.0) {
        return Err(Error::param("x0", "must be positive"));
    }
    let c = annihilation(dim)?;
    Ok(c.adjoint().sub(&c).scale(C64::new(0.0, HBAR / (2.0 * x0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn annihilation_lowers() {
        let a = annihilation(2).unwrap();
        let one = StateVector::basis(1, 2).unwrap();
        assert_eq!(a.apply(&one), StateVector::basis(0, 2).unwrap());
    }

    #[test]
    fn annihilation_rejects_small_dim() {
        assert!(matches!(annihilation(1), Err(Error::InvalidDimension { dim: 1, min: 2 })));
    }

    #[test]
    fn number_operator_from_ladder() {
        let a = annihilation(5).unwrap();
        let n = &a.adjoint() * &a;
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { i as f64 } else { 0.0 };
                assert!((n.get(i, j) - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn commutator_is_identity_below_edge() {
        let a = annihilation(12).unwrap();
        let comm = a.commutator(&a.adjoint());
        for n in 0..11 {
            assert!((comm.get(n, n) - c(1.0, 0.0)).norm() < 1e-13);
        }
        // the truncation edge carries the defect
        assert!((comm.get(11, 11) - c(-11.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn coherent_eigenrelation() {
        let psi = coherent_state(c(0.5, 0.0), 40).unwrap();
        let lowered = annihilation(40).unwrap().apply(&psi);
        let expected = psi.scale(c(0.5, 0.0));
        for n in 0..40 {
            assert!((lowered.amp(n) - expected.amp(n)).norm() < 1e-9);
        }
    }

    #[test]
    fn vacuum_coherent_state() {
        assert_eq!(coherent_state(c(0.0, 0.0), 8).unwrap(), StateVector::basis(0, 8).unwrap());
    }

    #[test]
    fn coherent_amplitude_ratio() {
        let psi = coherent_state(c(1.0, 0.0), 30).unwrap();
        assert!((psi.amp(1) / psi.amp(0) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn coherent_overlap_closed_form() {
        let beta = c(0.3, 0.0);
        let gamma = c(0.0, 0.7);
        let b = coherent_state(beta, 40).unwrap();
        let g = coherent_state(gamma, 40).unwrap();
        let want = (-(beta - gamma).norm_sqr()).exp();
        assert!((b.fidelity(&g) - want).abs() < 1e-8);
    }

    #[test]
    fn truncation_is_reported() {
        match coherent_state(c(3.0, 0.0), 10) {
            Err(Error::Truncation { dim, tail, .. }) => {
                assert_eq!(dim, 10);
                assert!(tail > 1e-3);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn suggested_dim_is_adequate() {
        for r in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let dim = suggested_dim(r);
            assert!(coherent_state(c(r, 0.0), dim).is_ok(), "r = {r}, dim = {dim}");
        }
    }

    #[test]
    fn added_vacuum_is_one_phonon() {
        let psi = added_coherent_state(c(0.0, 0.0), 8).unwrap();
        assert_eq!(psi, StateVector::basis(1, 8).unwrap());
    }

    #[test]
    fn added_state_normalized() {
        let psi = added_coherent_state(c(0.9, 0.2), 40).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-9);
        assert_eq!(psi.amp(0), c(0.0, 0.0));
    }

    #[test]
    fn added_state_projection() {
        let gamma = c(0.5, 0.0);
        let raised = creation(40).unwrap().apply(&coherent_state(gamma, 40).unwrap());
        let added = added_coherent_state(gamma, 40).unwrap();
        let proj = added.inner(&raised);
        assert!((proj.norm() - (gamma.norm_sqr() + 1.0).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn displacement_of_vacuum() {
        let eta = c(0.4, -0.1);
        let d = displacement(eta, 40).unwrap();
        let psi = d.apply(&StateVector::basis(0, 40).unwrap());
        let target = coherent_state(eta, 40).unwrap();
        assert!(psi.fidelity(&target) >= 1.0 - 1e-8);
    }

    #[test]
    fn displacement_zero_is_identity() {
        let d = displacement(c(0.0, 0.0), 20).unwrap();
        assert!(d.max_deviation_in_block(&OperatorMatrix::identity(20), 20) < 1e-15);
    }

    #[test]
    fn displacement_inverse() {
        let eta = c(0.6, 0.3);
        let d = displacement(eta, 40).unwrap();
        let dinv = displacement(-eta, 40).unwrap();
        let prod = &d * &dinv;
        assert!(prod.max_deviation_in_block(&OperatorMatrix::identity(40), 20) < 1e-9);
    }

    #[test]
    fn vacuum_position_variance() {
        let x0 = 5.3e-15;
        let x = position_operator(10, x0).unwrap();
        let x2 = &x * &x;
        let vac = StateVector::basis(0, 10).unwrap();
        assert!((x2.expectation(&vac).re / (x0 * x0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_position_mean() {
        let x0 = 1.0;
        let psi = coherent_state(c(0.5, 0.0), 40).unwrap();
        let mean = position_operator(40, x0).unwrap().expectation(&psi);
        assert!((mean.re - 2.0 * x0 * 0.5).abs() < 1e-8);
        assert!(mean.im.abs() < 1e-12);
    }

    #[test]
    fn canonical_commutator_interior() {
        let x0 = 4.3e-15;
        let dim = 12;
        let x = position_operator(dim, x0).unwrap();
        let p = momentum_operator(dim, x0).unwrap();
        let comm = x.commutator(&p);
        for i in 0..dim - 1 {
            assert!((comm.get(i, i) / HBAR - c(0.0, 1.0)).norm() < 1e-12);
            for j in 0..dim - 1 {
                if i != j {
                    assert!(comm.get(i, j).norm() / HBAR < 1e-12);
                }
            }
        }
    }

    #[test]
    fn position_rejects_bad_scale() {
        assert!(position_operator(4, 0.0).is_err());
        assert!(momentum_operator(4, -1.0).is_err());
    }
}
