//! Exact post-selected Gaussian pointer versus its weak-value approximation
//! as the coupling shrinks.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use ptsim::dilation::frame_vectors;
use ptsim::repro::bender_dilation;
use ptsim::weak::{pointer_exact, pointer_weak_approx, weak_value, WeakSetup, DEFAULT_GRID_POINTS};
use ptsim::Tolerances;

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    let d = bender_dilation(SQRT_2, FRAC_PI_4, 0.1, &tol)?;
    let f = frame_vectors(&d, 0)?;
    let width = 1.0;
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "g/D", "L2 grid", "L2 exact", "mean exact", "g Re A_w");
    for ratio in [0.2, 0.1, 0.05, 0.025, 0.01] {
        let g = ratio * width;
        let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde.clone(), f.mu_tilde.clone(), g, width, &tol)?;
        let aw = weak_value(&setup, &tol)?;
        let exact = pointer_exact(&setup, &tol)?;
        let approx = pointer_weak_approx(&setup, &tol)?;
        let analytic = exact.l2_distance(&approx)?;
        let (lo, hi) = exact.default_range(&[&approx]);
        let eg = exact.clone().sampled(lo, hi, DEFAULT_GRID_POINTS)?;
        let ag = approx.sampled(lo, hi, DEFAULT_GRID_POINTS)?;
        println!(
            "{ratio:>8} {:>12.4e} {:>12.4e} {:>12.6} {:>12.6}",
            eg.grid_l2_distance(&ag)?,
            analytic,
            exact.mean_position()?,
            g * aw.re
        );
    }
    Ok(())
}
