//! Gravitational interaction of two uniform spheres: the closed-form overlap
//! potential against direct shell-by-shell integration.

use optomech::decoherence::{brute_force_interaction, overlap_potential, BruteForceGrid};
use optomech::physconst::G;
use std::time::Instant;

fn main() -> optomech::Result<()> {
    let (m, mn, a) = (1e-12, 3e-25, 5e-15);
    let scale = G * m * mn / a;
    let grid = BruteForceGrid::default();
    println!("energies in units of GMm/a");
    println!("{:>6} {:>14} {:>14} {:>10}", "dx/a", "closed form", "integrated", "rel diff");
    for ratio in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
        let start = Instant::now();
        let brute = brute_force_interaction(m, mn, a, ratio * a, &grid)?;
        let closed = overlap_potential(m, mn, a, ratio * a);
        println!(
            "{ratio:>6} {:>14.10} {:>14.10} {:>10.1e}   ({:.1} ms)",
            closed / scale,
            brute / scale,
            (brute / closed - 1.0).abs(),
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    println!("self-energy −6/5 = {:.10}", -1.2);
    Ok(())
}
