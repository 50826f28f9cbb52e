//! The two-level model `H = [[r e^{i theta}, s], [s, r e^{-i theta}]]` with
//! `P` the swap and `T` plain conjugation, assembled from closed forms.

use super::canonical::{CanonicalData, JordanBlock};
use super::system::PTSystem;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I, ONE, ZERO};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenderModel {
    pub r: f64,
    pub theta: f64,
    pub s: f64,
}

/// Closed-form `H~`, `Psi~ = [Psi; Psi]` and `Phi~^dag` for `Xi = Psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenderDilation {
    pub h_tilde: CMatrix,
    pub psi_tilde: CMatrix,
    pub phi_tilde_adjoint: CMatrix,
}

impl BenderModel {
    pub fn new(r: f64, theta: f64, s: f64) -> Self {
        BenderModel { r, theta, s }
    }

    /// `s^2 - r^2 sin^2 theta`; negative in the broken regime.
    pub fn delta(&self) -> f64 {
        let rs = self.r * self.theta.sin();
        self.s * self.s - rs * rs
    }

    /// `sqrt(-delta) + r sin theta` (broken regime).
    pub fn u(&self) -> f64 {
        (-self.delta()).max(0.0).sqrt() + self.r * self.theta.sin()
    }

    pub fn hamiltonian(&self) -> CMatrix {
        let (r, th, s) = (self.r, self.theta, C64::new(self.s, 0.0));
        CMatrix::from_rows(&[
            vec![C64::from_polar(r, th), s],
            vec![s, C64::from_polar(r, -th)],
        ])
        .expect("2x2")
    }

    pub fn parity(&self) -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn time_reversal(&self) -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn system(&self) -> PTSystem {
        PTSystem::new(self.hamiltonian(), self.parity(), self.time_reversal()).expect("2x2 system")
    }

    /// `r cos theta +- i sqrt(-delta)`, the `+` branch first.
    pub fn eigenvalues(&self) -> [C64; 2] {
        let re = self.r * self.theta.cos();
        let im = (-self.delta()).max(0.0).sqrt();
        [C64::new(re, im), C64::new(re, -im)]
    }

    /// `Psi = [[iu, -s], [s, iu]]`, columns are the eigenvectors.
    pub fn frame(&self) -> CMatrix {
        let iu = I * self.u();
        let s = C64::new(self.s, 0.0);
        CMatrix::from_rows(&[vec![iu, -s], vec![s, iu]]).expect("2x2")
    }

    /// `(1 / (s^2 - u^2)) [[iu, s], [-s, iu]]`.
    pub fn frame_inverse(&self) -> CMatrix {
        let u = self.u();
        let k = 1.0 / (self.s * self.s - u * u);
        let iu = I * u;
        let s = C64::new(self.s, 0.0);
        CMatrix::from_rows(&[vec![iu, s], vec![-s, iu]])
            .expect("2x2")
            .scale_real(k)
    }

    /// `det(S - Psi^dag Psi) = -4 delta u^2 - 1`.
    pub fn frame_determinant(&self) -> f64 {
        let u = self.u();
        -4.0 * self.delta() * u * u - 1.0
    }

    fn check_regime(&self, tol: &Tolerances) -> Result<()> {
        let delta = self.delta();
        if delta.abs() <= tol.residual {
            return Err(Error::ExceptionalPoint { delta });
        }
        if delta > 0.0 {
            return Err(Error::UnbrokenRegime { delta });
        }
        Ok(())
    }

    /// Canonical data with `Psi' = Psi`, `J = diag(lambda, conj(lambda))`, `S` the swap.
    pub fn canonical(&self, tol: &Tolerances) -> Result<CanonicalData> {
        self.check_regime(tol)?;
        let [lambda, _] = self.eigenvalues();
        let psi = self.frame();
        let s = self.parity();
        let psi_inv = self.frame_inverse();
        let eta = &(&psi_inv.adjoint() * &s) * &psi_inv;
        Ok(CanonicalData {
            psi_prime: psi,
            blocks: JordanBlock::pair(lambda, 1, 0).to_vec(),
            s,
            perm: vec![1, 0],
            eta,
            epsilons: vec![1, 1],
        })
    }

    /// Closed-form dilation with `Xi = Psi`, unscaled.
    pub fn closed_form_dilation(&self, tol: &Tolerances) -> Result<BenderDilation> {
        self.check_regime(tol)?;
        let det = self.frame_determinant();
        if det.abs() <= tol.rcond_floor {
            return Err(Error::SingularFrame { rcond: det.abs() });
        }
        let (r, th, s, u) = (self.r, self.theta, self.s, self.u());
        let w = u * u - s * s;
        let a1 = C64::new(s / w, 0.0);
        let a2 = C64::from_polar(r / w, -th);
        let a3 = C64::from_polar(r / w, th);
        let b1 = -w * w;
        let b2 = s * s - u * u;
        let k = 1.0 / det;
        let re = |x: f64| C64::new(x, 0.0);
        let h_tilde = CMatrix::from_rows(&[
            vec![a1, a2, ONE, ZERO],
            vec![a3, a1, ZERO, ONE],
            vec![ONE, ZERO, re(-1.0 - k * b1), re(-k * b2)],
            vec![ZERO, ONE, re(-k * b2), re(-1.0 - k * b1)],
        ])?;
        let psi = self.frame();
        let psi_tilde = CMatrix::vstack(&psi, &psi);
        let k2 = 1.0 / (s * s - u * u);
        let phi_tilde_adjoint = CMatrix::from_rows(&[
            vec![-I * u, re(s), I * u - k2 * s, I * (k2 * u) - s],
            vec![re(-s), -I * u, I * (k2 * u) + s, I * u + k2 * s],
        ])?;
        Ok(BenderDilation {
            h_tilde,
            psi_tilde,
            phi_tilde_adjoint,
        })
    }
}

/// PT system and closed-form canonical data of the two-level model.
pub fn bender_model(r: f64, theta: f64, s: f64, tol: &Tolerances) -> Result<(PTSystem, CanonicalData)> {
    let m = BenderModel::new(r, theta, s);
    let canon = m.canonical(tol)?;
    Ok((m.system(), canon))
}
