//! Detected value and post-measurement state for a superposition of
//! broken-PT eigenstates.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use ptsim::linalg::C64;
use ptsim::pt::BenderModel;
use ptsim::weak::{collapse, eta_inner};
use ptsim::{random, Error, Tolerances};

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    let canon = BenderModel::new(SQRT_2, FRAC_PI_4, 0.1).canonical(&tol)?;
    let lambda = canon.eigenvalues();
    println!("lambda = {:.6}, {:.6}", lambda[0], lambda[1]);

    for a in [
        [C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(1.0, 0.0), C64::new(0.5, 0.5)],
        [C64::new(2.0, 1.0), C64::new(-0.3, 1.0)],
    ] {
        let out = collapse(&canon, &a, 0, &tol)?;
        let norm = eta_inner(&out.post_state, &out.post_state, &canon.eta)?;
        println!(
            "a = ({:.2}, {:.2}): detected {:.10}, |eta-norm of post state| = {:.12}",
            a[0],
            a[1],
            out.detected_value,
            norm.norm()
        );
    }
    // Re(a_1 conj(a_2)) = 0 leaves nothing to detect
    match collapse(&canon, &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)], 0, &tol) {
        Err(Error::NullDenominator) => println!("a = (1, i): NullDenominator"),
        other => println!("a = (1, i): unexpected {other:?}"),
    }

    // a real level is its own partner
    let mut rng = random::rng(3);
    let (_, canon) = random::random_system(&mut rng, 3, 1, &tol)?;
    let out = collapse(&canon, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 2.0)], 2, &tol)?;
    println!(
        "real level {:.6}: detected {:.6}, pair {:?}",
        canon.eigenvalues()[2].re,
        out.detected_value,
        out.pair
    );
    Ok(())
}
