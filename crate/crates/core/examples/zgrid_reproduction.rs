//! Z parameters of the two-level model over (t, s) in [0, 0.2]^2, written as CSV.
//!
//! `cargo run --example zgrid_reproduction -- out.csv`

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use ptsim::repro::{z_convergence, z_grid};
use ptsim::Tolerances;

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    let grid = z_grid(SQRT_2, FRAC_PI_4, 0.2, 0.2, 41, &tol)?;
    let m = grid.maxima();
    println!(
        "max Z11 {:.6}  max Z22 {:.6}  max Z12 {:.6}  max Z21 {:.6}",
        m.max_z11, m.max_z22, m.max_z12, m.max_z21
    );
    if let Some(path) = std::env::args().nth(1) {
        let file = std::fs::File::create(&path).expect("create CSV file");
        grid.write_csv(std::io::BufWriter::new(file))?;
        println!("wrote {path}");
    }

    println!("\nat s = 0.1:");
    for z in z_convergence(SQRT_2, FRAC_PI_4, 0.1, &[0.2, 0.1, 0.05, 0.025, 0.0], &tol)? {
        println!("  t = {:<6} Z11 {:.3e}  Z12 {:.3e}", z.t, z.z11, z.z12);
    }
    Ok(())
}
