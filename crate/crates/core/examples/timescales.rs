//! Decoherence timescales of every mechanism for the two proposed devices,
//! compared with environmental decoherence at 1 mK.

use optomech::decoherence::{full_report, Mechanism};
use optomech::devices::builtin;

fn main() -> optomech::Result<()> {
    for name in ["proposed1", "proposed2"] {
        let device = builtin(name).expect("builtin device");
        let report = full_report(&device, 1e-3, &Mechanism::all())?;
        println!("{name}: τ_EID = {:.3e} s (quoted variant {:.3e} s)", report.tau_eid, report.tau_eid_quoted);
        for e in &report.entries {
            let tau = e.tau.map_or("error".to_string(), |t| format!("{t:.3e} s"));
            let verdict = if e.testable { "faster than EID" } else { "" };
            println!("  {:<28} {tau:>12}  {verdict}", e.mechanism.label());
            if let Some(w) = &e.warning {
                println!("    note: {w}");
            }
        }
        println!();
    }
    Ok(())
}
