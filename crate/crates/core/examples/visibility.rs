//! Coherence of the |0⟩/|1⟩ superposition on Proposed #1 under the thermal
//! bath and under CSL-type localization.

use optomech::decoherence::{csl_localization, eid_timescale};
use optomech::devices::builtin;
use optomech::dynamics::{crossing_time, visibility_curve, Channel, DEFAULT_DIM};

fn main() -> optomech::Result<()> {
    let device = builtin("proposed1").expect("builtin device");
    let t_env = 1e-3;
    let tau_eid = eid_timescale(device.q_m, t_env);
    let (r, b) = device.geometry()?;
    let csl = csl_localization(device.mass, r, b)?;

    // CSL is far too slow to see on this window; the column stays near 1.
    let channels =
        [Channel::None, Channel::Eid { t_env }, Channel::Localized { label: "csl".into(), lambda: csl.lambda }];
    let points = 41;
    let t_max = 5.0 * tau_eid;
    let times: Vec<f64> = (0..points).map(|k| t_max * k as f64 / (points - 1) as f64).collect();
    let table = visibility_curve(&device, &channels, &times, DEFAULT_DIM)?;

    print!("{:>12}", "t (s)");
    for c in &table.columns {
        print!("{:>12}", c.label);
    }
    println!();
    for (k, t) in table.times.iter().enumerate().step_by(4) {
        print!("{t:>12.3e}");
        for c in &table.columns {
            print!("{:>12.6}", c.values[k]);
        }
        println!();
    }

    let eid = &table.columns[1];
    let e_fold = crossing_time(&table.times, &eid.values, (-1.0f64).exp());
    println!("\nτ_EID = {tau_eid:.3e} s, visibility reaches 1/e at {:.3e} s", e_fold.unwrap_or(f64::NAN));
    println!(
        "EID run: {} steps, max trace drift/step {:.1e}, min eigenvalue {:.1e}, top-level population {:.1e}",
        eid.stats.steps, eid.stats.max_step_trace_drift, eid.stats.min_eigenvalue, eid.stats.max_top_population
    );
    Ok(())
}
