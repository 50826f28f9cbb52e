//! Dilations of random PT-symmetric systems, with and without Jordan chains.

use ptsim::dilation::{build_dilation, DilationOptions, FrameScaling};
use ptsim::pt::classify;
use ptsim::{random, Tolerances};

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    let mut rng = random::rng(7);
    for (n, jordan) in [(2, 1), (3, 1), (4, 1), (5, 1), (4, 2), (5, 2)] {
        let (sys, canon) = random::random_system(&mut rng, n, jordan, &tol)?;
        let xi = random::invertible_matrix(&mut rng, n);
        let options = DilationOptions { xi: Some(xi), scaling: FrameScaling::Auto };
        let d = build_dilation(&sys.h, &canon, &options, &tol)?;
        println!(
            "n = {n}, Jordan size {jordan}: {:?}, c = {:.4}, worst residual {:.2e}",
            classify(&sys.h, &tol)?,
            d.c,
            d.residuals().max()
        );
    }
    Ok(())
}
