//! The eta-expectation of H in a superposition equals a weak value of H~.

use ptsim::dilation::{build_dilation, DilationOptions};
use ptsim::weak::expectation_eta;
use ptsim::{random, Tolerances};

fn main() -> ptsim::Result<()> {
    let tol = Tolerances::default();
    let mut rng = random::rng(42);
    for n in [2, 3, 4, 5] {
        let (sys, canon) = random::random_system(&mut rng, n, 1, &tol)?;
        let d = build_dilation(&sys.h, &canon, &DilationOptions::default(), &tol)?;
        let a = random::complex_vector(&mut rng, n);
        let e = expectation_eta(&d, &a, &tol)?;
        println!(
            "n = {n}: <u|eta H|u>/<u|eta|u> = {:.10}{:+.10}i, dilation = {:.10}{:+.10}i, gap {:.1e}",
            e.lhs.re,
            e.lhs.im,
            e.rhs.re,
            e.rhs.im,
            (e.lhs - e.rhs).norm()
        );
    }
    Ok(())
}
