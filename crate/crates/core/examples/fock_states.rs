//! Coherent and photon-added coherent states in a truncated number basis,
//! and the displacement operator built by matrix exponential.

use optomech::fock::{added_coherent_state, annihilation, coherent_state, displacement, number, StateVector};
use optomech::C64;

fn main() -> optomech::Result<()> {
    let dim = 40;
    let gamma = C64::new(1.2, 0.5);

    let psi = coherent_state(gamma, dim)?;
    let c = annihilation(dim)?;
    let residual = c.apply(&psi).sub(&psi.scale(gamma)).norm_sqr().sqrt();
    println!("|γ⟩ with γ = {gamma}: ‖c|γ⟩ − γ|γ⟩‖ = {residual:.2e}, ⟨n⟩ = {:.6}", number(dim)?.expectation(&psi).re);

    let added = added_coherent_state(gamma, dim)?;
    let mean_n = number(dim)?.expectation(&added).re;
    let g2 = gamma.norm_sqr();
    let expected = (g2 * g2 + 3.0 * g2 + 1.0) / (1.0 + g2);
    println!("|γ,1⟩: ⟨n⟩ = {mean_n:.6} (closed form {expected:.6}), vacuum weight {:.1e}", added.amp(0).norm_sqr());

    let d = displacement(gamma, dim)?;
    let displaced = d.apply(&StateVector::basis(0, dim)?);
    println!("D(γ)|0⟩ vs |γ⟩: fidelity {:.12}", displaced.fidelity(&psi));

    println!("\n n   |⟨n|γ⟩|²     |⟨n|γ,1⟩|²");
    for n in 0..8 {
        println!("{n:>2}   {:.6}     {:.6}", psi.amp(n).norm_sqr(), added.amp(n).norm_sqr());
    }

    match coherent_state(C64::new(4.0, 0.0), 12) {
        Ok(_) => println!("\nunexpected: |4⟩ fits in 12 levels"),
        Err(e) => println!("\ntruncation is checked: {e}"),
    }
    Ok(())
}
