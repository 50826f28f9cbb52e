//! Dilate the two-level broken model and compare with its closed form.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use ptsim::pt::BenderModel;
use ptsim::repro::bender_dilation;
use ptsim::Tolerances;

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    let s = 0.1;
    let m = BenderModel::new(SQRT_2, FRAC_PI_4, s);
    let [lp, lm] = m.eigenvalues();
    println!("H = [[r e^(i theta), s], [s, r e^(-i theta)]] with r = sqrt 2, theta = pi/4, s = {s}");
    println!("eigenvalues: {lp:.6}, {lm:.6}");

    let d = bender_dilation(SQRT_2, FRAC_PI_4, s, &tol)?;
    let closed = m.closed_form_dilation(&tol)?;
    println!("H~ (4x4, Hermitian):");
    for i in 0..4 {
        let row: Vec<String> = d.h_tilde.row(i).iter().map(|z| format!("{:>9.5}{:+.5}i", z.re, z.im)).collect();
        println!("  {}", row.join("  "));
    }
    println!("max |H~ - closed form|  = {:.2e}", d.h_tilde.max_abs_diff(&closed.h_tilde));
    println!("max |Phi~^dag - closed| = {:.2e}", d.phi_tilde.adjoint().max_abs_diff(&closed.phi_tilde_adjoint));
    let r = d.residuals();
    println!(
        "residuals: hermiticity {:.1e}, overlap {:.1e}, hamiltonian {:.1e}",
        r.hermiticity, r.overlap, r.hamiltonian
    );
    Ok(())
}
