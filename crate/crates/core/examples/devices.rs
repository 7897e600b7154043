//! Built-in resonators, their derived optomechanical parameters, and a
//! round trip through the device file format.

use optomech::devices::{builtin_devices, derive, parse_device, to_device_file};

fn main() -> optomech::Result<()> {
    println!("{:<10} {:>10} {:>10} {:>11} {:>10} {:>10}", "device", "x0 (m)", "κ", "ω_m/Γ_c", "T_EID (K)", "Γ_c (1/s)");
    for d in builtin_devices() {
        let p = derive(&d);
        println!(
            "{:<10} {:>10.3e} {:>10.3e} {:>11.3} {:>10.3} {:>10.3e}",
            d.name, p.x0, p.kappa, p.sideband_ratio, p.t_eid, p.cavity_linewidth
        );
    }

    let original = builtin_devices().remove(2);
    let text = to_device_file(&original);
    println!("\n{text}");
    let parsed = parse_device(&text, "unnamed")?;
    println!("parsed back identical: {}", parsed == original);

    let green = original.clone().with_wavelength(532e-9);
    println!("κ at 532 nm / κ at 1064 nm = {:.6}", derive(&green).kappa / derive(&original).kappa);
    Ok(())
}
