//! Read a complex eigenvalue of a broken-PT Hamiltonian as a weak value of
//! its Hermitian dilation.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use ptsim::dilation::frame_vectors;
use ptsim::pt::BenderModel;
use ptsim::repro::bender_dilation;
use ptsim::weak::{weak_value, WeakSetup};
use ptsim::Tolerances;

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    for s in [0.05, 0.1, 0.5, 0.9] {
        let d = bender_dilation(SQRT_2, FRAC_PI_4, s, &tol)?;
        let exact = BenderModel::new(SQRT_2, FRAC_PI_4, s).eigenvalues();
        for (i, lambda) in exact.into_iter().enumerate() {
            // pre-select psi~_i, post-select its partner mu~_i
            let f = frame_vectors(&d, i)?;
            let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde, f.mu_tilde, 0.0, 1.0, &tol)?;
            let w = weak_value(&setup, &tol)?;
            println!(
                "s = {s:<4}  i = {}  weak value {:.12}{:+.12}i  |error| {:.1e}",
                i + 1,
                w.re,
                w.im,
                (w - lambda).norm()
            );
        }
    }
    Ok(())
}
