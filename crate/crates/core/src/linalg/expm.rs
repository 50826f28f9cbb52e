//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection and the backward-error thresholds follow Higham's 2005
//! algorithm (N. J. Higham, "The scaling and squaring method for the matrix
//! exponential revisited", SIAM J. Matrix Anal. Appl. 26(4)). No eigenvectors
//! are involved, so defective input is handled like any other.

use super::lu;
use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn lin(terms: &[(f64, &CMatrix)]) -> CMatrix {
    let (k0, m0) = terms[0];
    let mut out = m0.scale_real(k0);
    for &(k, m) in &terms[1..] {
        out = &out + &m.scale_real(k);
    }
    out
}

/// `(U, V)` of a low-degree approximant: `U` odd part, `V` even part.
fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let ident = CMatrix::identity(n);
    let a2 = a * a;
    let mut even_powers = vec![ident];
    for k in 1..b.len() / 2 {
        let next = &even_powers[k - 1] * &a2;
        even_powers.push(next);
    }
    let mut u = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, p) in even_powers.iter().enumerate() {
        v = &v + &p.scale_real(b[2 * k]);
        u = &u + &p.scale_real(b[2 * k + 1]);
    }
    (a * &u, v)
}

fn pade_13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let b = &PADE_13;
    let ident = CMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = lin(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u = a * &(&(&a6 * &inner_u) + &lin(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &ident)]));
    let inner_v = lin(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v = &(&a6 * &inner_v) + &lin(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &ident)]);
    (u, v)
}

/// `e^A` for a square complex matrix.
pub fn expm(a: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "exponential needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let norm = a.norm_1();
    if norm > tol.expm_norm_bound {
        return Err(Error::OverflowRisk {
            norm,
            bound: tol.expm_norm_bound,
        });
    }
    let n = a.rows();
    let low: [(f64, &[f64]); 4] = [
        (THETA_3, &PADE_3),
        (THETA_5, &PADE_5),
        (THETA_7, &PADE_7),
        (THETA_9, &PADE_9),
    ];
    let (u, v, squarings) = match low.iter().find(|(theta, _)| norm <= *theta) {
        Some((_, coeffs)) => {
            let (u, v) = pade_low(a, coeffs);
            (u, v, 0)
        }
        None => {
            let s = if norm > THETA_13 {
                (norm / THETA_13).log2().ceil().max(0.0) as i32
            } else {
                0
            };
            let scaled = a.scale_real(0.5f64.powi(s));
            let (u, v) = pade_13(&scaled);
            (u, v, s)
        }
    };
    let p = &v + &u;
    let q = &v - &u;
    let mut r = lu::solve(&q, &p, tol)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    debug_assert_eq!(r.rows(), n);
    Ok(r)
}

/// `e^{-i t A}`.
pub fn evolution(a: &CMatrix, t: f64, tol: &Tolerances) -> Result<CMatrix> {
    expm(&a.scale(C64::new(0.0, -t)), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{ONE, ZERO};

    #[test]
    fn zero_gives_identity() {
        let tol = Tolerances::default();
        assert_eq!(
            expm(&CMatrix::zeros(2, 2), &tol).unwrap(),
            CMatrix::identity(2)
        );
    }

    #[test]
    fn jordan_block_closed_form() {
        // exp(-it J_2(lambda)) = e^{-it lambda} [[1, -it], [0, 1]]
        let tol = Tolerances::default();
        let lambda = C64::new(0.7, -0.3);
        for t in [0.01, 0.3, 2.0, 7.5] {
            let j = CMatrix::from_rows(&[vec![lambda, ONE], vec![ZERO, lambda]]).unwrap();
            let got = evolution(&j, t, &tol).unwrap();
            let phase = (C64::new(0.0, -t) * lambda).exp();
            let expected = CMatrix::from_rows(&[
                vec![phase, phase * C64::new(0.0, -t)],
                vec![ZERO, phase],
            ])
            .unwrap();
            let rel = got.max_abs_diff(&expected) / expected.norm_max();
            assert!(rel < 1e-13, "t = {t}: {rel}");
        }
    }

    #[test]
    fn scalar_matches_exp() {
        let tol = Tolerances::default();
        for x in [1e-4, 0.1, 1.0, 5.0, 40.0, -30.0] {
            let z = C64::new(x, 0.5 * x);
            let got = expm(&CMatrix::from_diag(&[z]), &tol).unwrap()[(0, 0)];
            assert!((got - z.exp()).norm() <= 1e-13 * z.exp().norm(), "x = {x}");
        }
    }

    #[test]
    fn overflow_guard() {
        let tol = Tolerances::default();
        let a = CMatrix::identity(2).scale_real(2e6);
        assert!(matches!(expm(&a, &tol), Err(Error::OverflowRisk { .. })));
    }
}
