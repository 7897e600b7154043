//! CSL geometry factor of a disk: the full quadrature across sizes, with the
//! small-disk limit f → 1 and the large-disk asymptote (2a/R)²(2a/b)².

use optomech::decoherence::{disk_geometry_factor, CSL_DISTANCE, DEFAULT_GEOMETRY_TOL};

fn main() -> optomech::Result<()> {
    let a = CSL_DISTANCE;
    println!("{:>10} {:>10} {:>13} {:>13} {:>9}", "R/2a", "b/2a", "f", "asymptote", "f/asym");
    for u in [0.005, 0.1, 0.5, 1.0, 3.0, 10.0, 20.0, 200.0] {
        let v = 25.0;
        let f = disk_geometry_factor(2.0 * a * u, 2.0 * a * v, a, DEFAULT_GEOMETRY_TOL)?;
        let asym = 1.0 / (u * u * v * v);
        println!("{u:>10} {v:>10} {f:>13.6e} {asym:>13.6e} {:>9.4}", f / asym);
    }
    let tiny = disk_geometry_factor(a / 100.0, a / 100.0, a, DEFAULT_GEOMETRY_TOL)?;
    println!("\nR = b = a/100: f = {tiny:.8}");
    Ok(())
}
