//! Thermal averaging of the postselection probability: seeded Monte Carlo
//! over the initial coherent amplitude against the closed-form average.

use optomech::interferometer::{
    nbar_from_temperature, thermal_monte_carlo, thermal_postselect_probability, thermal_snr, Estimator,
};
use std::f64::consts::PI;

fn main() -> optomech::Result<()> {
    let kappa = 0.01;
    let samples = 100_000;
    let seed = 7;
    println!("{:>6} {:>7} {:>13} {:>13} {:>13} {:>8}", "n̄", "θ", "formula", "MC lowest", "MC exact", "SNR");
    for (nbar, theta) in [(0.2, 1.0), (1.0, PI / 2.0), (0.5, 2.5), (4.0, PI / 2.0)] {
        let (s, n) = thermal_postselect_probability(nbar, kappa, theta);
        let lowest = thermal_monte_carlo(nbar, kappa, theta, samples, seed, Estimator::LowestOrder)?;
        let exact = thermal_monte_carlo(nbar, kappa, theta, samples, seed, Estimator::Exact)?;
        println!(
            "{nbar:>6} {theta:>7.3} {:>13.5e} {:>13.5e} {:>13.5e} {:>8.3}",
            s + n,
            lowest.mean,
            exact.mean,
            thermal_snr(nbar, theta)
        );
    }

    let omega = 2.0 * PI * 300e3;
    for t in [1e-6, 10e-6, 100e-6] {
        println!("T = {:>5.0} μK at 300 kHz: n̄ = {:.3}", t * 1e6, nbar_from_temperature(t, omega));
    }
    Ok(())
}
