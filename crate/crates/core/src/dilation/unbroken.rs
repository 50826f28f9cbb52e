use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, I, ZERO};
use crate::pt::{CanonicalData, JordanBlock, PTSystem};
use crate::tolerance::Tolerances;

/// Isometric embedding `Psi~ = [Psi; Xi]` with `Psi~^dag Psi~ = I` and
/// `H~ Psi~ = Psi~ J`, available only when `S = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnbrokenEmbedding {
    pub h: CMatrix,
    pub h_tilde: CMatrix,
    pub psi_tilde: CMatrix,
    /// Real diagonal.
    pub j: CMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    /// `||Psi~^dag Psi~ - I||`
    pub isometry: f64,
    /// `||H~ Psi~ - Psi~ J||`
    pub eigen: f64,
    /// `||H Psi - Psi J||`
    pub subspace: f64,
    /// `||H~ - H~^dag||`
    pub hermiticity: f64,
    /// `(t, ||e^{-itH~} Psi~ - Psi~ e^{-itJ}||)`
    pub evolution: Vec<(f64, f64)>,
}

impl EmbeddingReport {
    pub fn max(&self) -> f64 {
        self.evolution
            .iter()
            .map(|&(_, r)| r)
            .fold(self.isometry.max(self.eigen).max(self.subspace).max(self.hermiticity), f64::max)
    }
}

impl UnbrokenEmbedding {
    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    /// The upper block `Psi` of `Psi~`.
    pub fn psi(&self) -> CMatrix {
        self.psi_tilde.submatrix(0, 0, self.dim(), self.dim())
    }

    /// Frobenius-norm residuals of the embedding conditions, and of the
    /// evolution identity at each sample time.
    pub fn verify(&self, t_samples: &[f64], tol: &Tolerances) -> Result<EmbeddingReport> {
        let n = self.dim();
        let pt = &self.psi_tilde;
        let psi = self.psi();
        let mut evolution = Vec::with_capacity(t_samples.len());
        for &t in t_samples {
            let lhs = &linalg::evolution(&self.h_tilde, t, tol)? * pt;
            let rhs = pt * &linalg::evolution(&self.j, t, tol)?;
            evolution.push((t, (&lhs - &rhs).norm_fro()));
        }
        Ok(EmbeddingReport {
            isometry: (&(&pt.adjoint() * pt) - &CMatrix::identity(n)).norm_fro(),
            eigen: (&(&self.h_tilde * pt) - &(pt * &self.j)).norm_fro(),
            subspace: (&(&self.h * &psi) - &(&psi * &self.j)).norm_fro(),
            hermiticity: (&self.h_tilde - &self.h_tilde.adjoint()).norm_fro(),
            evolution,
        })
    }
}

/// Embedding of an unbroken `H` with canonical metric `S = I`.
///
/// `Psi = Psi' / (sqrt(2) sigma_max(Psi'))`, `Xi = (I - Psi^dag Psi)^{1/2}` and
/// `H~ = Psi~ J Psi~^dag`.
pub fn embed_unbroken(h: &CMatrix, canon: &CanonicalData, tol: &Tolerances) -> Result<UnbrokenEmbedding> {
    if !canon.is_identity_metric() {
        return Err(Error::BrokenSymmetry);
    }
    let n = canon.dim();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("H must be {n}x{n}")));
    }
    let scale = canon.eigenvalues().iter().map(|z| z.norm()).fold(1.0, f64::max);
    if let Some(z) = canon.eigenvalues().iter().find(|z| z.im.abs() > tol.pairing * scale) {
        return Err(Error::InvalidInput(format!(
            "S = I but eigenvalue {z} is not real"
        )));
    }
    let j = CMatrix::from_diag(
        &canon.eigenvalues().iter().map(|z| C64::new(z.re, 0.0)).collect::<Vec<_>>(),
    );
    let sigma_max = linalg::singular_values(&canon.psi_prime)[0];
    let psi = canon.psi_prime.scale_real(1.0 / (2f64.sqrt() * sigma_max));
    let xi = linalg::hermitian_sqrt(&(&CMatrix::identity(n) - &(&psi.adjoint() * &psi)), tol)?;
    let psi_tilde = CMatrix::vstack(&psi, &xi);
    let h_tilde = &(&psi_tilde * &j) * &psi_tilde.adjoint();
    let h_tilde = (&h_tilde + &h_tilde.adjoint()).scale_real(0.5);
    Ok(UnbrokenEmbedding {
        h: h.clone(),
        h_tilde,
        psi_tilde,
        j,
    })
}

/// Two-level unbroken model `H = [[E0 + i s sin theta, s], [s, E0 - i s sin theta]]`
/// with its closed-form four-dimensional embedding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuntherSamsonov {
    pub e0: f64,
    pub s: f64,
    pub theta: f64,
}

impl GuntherSamsonov {
    pub fn new(e0: f64, s: f64, theta: f64) -> Self {
        GuntherSamsonov { e0, s, theta }
    }

    pub fn hamiltonian(&self) -> CMatrix {
        let d = C64::new(self.e0, self.s * self.theta.sin());
        let s = C64::new(self.s, 0.0);
        CMatrix::from_rows(&[vec![d, s], vec![s, d.conj()]]).expect("2x2")
    }

    pub fn system(&self) -> PTSystem {
        PTSystem::new(
            self.hamiltonian(),
            CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            CMatrix::identity(2),
        )
        .expect("2x2 system")
    }

    /// `E0 + s cos theta`, `E0 - s cos theta`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let c = self.s * self.theta.cos();
        [self.e0 + c, self.e0 - c]
    }

    pub fn j(&self) -> CMatrix {
        let [a, b] = self.eigenvalues();
        CMatrix::from_diag(&[C64::new(a, 0.0), C64::new(b, 0.0)])
    }

    pub fn h_tilde(&self) -> CMatrix {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let e = C64::new(self.e0, 0.0);
        let a = C64::new(self.s * c * c, 0.0);
        let b = I * (self.s * c * s);
        CMatrix::from_rows(&[
            vec![e, a, b, ZERO],
            vec![a, e, ZERO, -b],
            vec![-b, ZERO, e, a],
            vec![ZERO, b, a, e],
        ])
        .expect("4x4")
    }

    pub fn psi_tilde(&self) -> CMatrix {
        let p = C64::from_polar(0.5, self.theta / 2.0);
        let m = C64::from_polar(0.5, -self.theta / 2.0);
        CMatrix::from_rows(&[
            vec![p, I * m],
            vec![m, -I * p],
            vec![m, I * p],
            vec![p, -I * m],
        ])
        .expect("4x2")
    }

    pub fn embedding(&self) -> UnbrokenEmbedding {
        UnbrokenEmbedding {
            h: self.hamiltonian(),
            h_tilde: self.h_tilde(),
            psi_tilde: self.psi_tilde(),
            j: self.j(),
        }
    }

    /// Canonical data with `Psi'` the upper block of the closed-form `Psi~`.
    pub fn canonical(&self, tol: &Tolerances) -> Result<CanonicalData> {
        let [a, b] = self.eigenvalues();
        CanonicalData::from_parts(
            &self.hamiltonian(),
            self.psi_tilde().submatrix(0, 0, 2, 2),
            vec![JordanBlock::real(a, 1), JordanBlock::real(b, 1)],
            None,
            tol,
        )
    }
}
