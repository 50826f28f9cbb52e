//! Isometric embedding of an unbroken PT-symmetric two-level system.

use std::f64::consts::FRAC_PI_3;

use ptsim::dilation::{embed_unbroken, GuntherSamsonov};
use ptsim::pt::canonical_pair;
use ptsim::repro::verify_unbroken_example;
use ptsim::Tolerances;

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    let times = [0.1, 0.5, 1.0, 5.0];
    for (e0, s, theta) in [(1.0, 0.5, FRAC_PI_3), (0.0, 1.0, 0.2)] {
        let rep = verify_unbroken_example(e0, s, theta, &times, &tol);
        println!("closed form (E0 = {e0}, s = {s}, theta = {theta:.4}): worst residual {:.2e}", rep.max_residual());
        for (t, r) in &rep.evolution {
            println!("  t = {t:<4} |e^(-itH~) Psi~ - Psi~ e^(-itJ)| = {r:.2e}");
        }

        let gs = GuntherSamsonov::new(e0, s, theta);
        let canon = canonical_pair(&gs.system(), None, &tol)?;
        let emb = embed_unbroken(&gs.hamiltonian(), &canon, &tol)?;
        println!("  numerical embedding: worst residual {:.2e}", emb.verify(&times, &tol)?.max());
    }
    Ok(())
}
