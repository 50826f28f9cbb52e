use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::pt::CanonicalData;
use crate::tolerance::Tolerances;

/// How the canonical frame is scaled before the construction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum FrameScaling {
    /// `c = sqrt(2 / lambda_min(Psi'^dag Psi'))`, so `Psi^dag Psi >= 2I`.
    #[default]
    Auto,
    /// A caller-chosen constant; `Fixed(1.0)` uses `Psi'` as is.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DilationOptions {
    /// Any invertible `n x n` matrix; `None` means `Xi = Psi`.
    pub xi: Option<CMatrix>,
    pub scaling: FrameScaling,
}

/// `c = sqrt(2 / lambda_min(Psi'^dag Psi'))` and `Psi = c Psi'`.
pub fn scale_frame(psi_prime: &CMatrix, tol: &Tolerances) -> Result<(f64, CMatrix)> {
    if !psi_prime.is_square() {
        return Err(Error::DimensionMismatch("frame must be square".into()));
    }
    let sv = linalg::singular_values(psi_prime);
    let (max, min) = (sv[0], *sv.last().expect("non-empty"));
    if min <= tol.rcond_floor * max {
        return Err(Error::SingularMatrix {
            rcond: if max > 0.0 { min / max } else { 0.0 },
        });
    }
    // lambda_min(Psi'^dag Psi') = sigma_min^2
    let c = 2f64.sqrt() / min;
    Ok((c, psi_prime.scale_real(c)))
}

/// Relative residuals of the dilation identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationResiduals {
    /// `||H~ - H~^dag|| / ||H~||`
    pub hermiticity: f64,
    /// `||Phi~^dag Psi~ - S|| / (||Phi~|| ||Psi~||)`
    pub overlap: f64,
    /// `||Phi~^dag H~ Psi~ - S J|| / (||Phi~|| ||H~|| ||Psi~||)`
    pub hamiltonian: f64,
    /// `||H1 - H1^dag|| / ||H1||`
    pub h1_hermiticity: f64,
}

impl DilationResiduals {
    pub fn max(&self) -> f64 {
        self.hermiticity
            .max(self.overlap)
            .max(self.hamiltonian)
            .max(self.h1_hermiticity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilationResult {
    pub h: CMatrix,
    pub h_tilde: CMatrix,
    /// `[Psi; Xi]`
    pub psi_tilde: CMatrix,
    /// `[Psi; Sigma]`
    pub phi_tilde: CMatrix,
    pub psi_prime: CMatrix,
    pub psi: CMatrix,
    pub xi: CMatrix,
    pub sigma: CMatrix,
    pub eta: CMatrix,
    pub s: CMatrix,
    pub j: CMatrix,
    pub perm: Vec<usize>,
    pub c: f64,
    pub h1: CMatrix,
    pub h2: CMatrix,
    pub h4: CMatrix,
}

fn rel(diff: &CMatrix, scale: f64) -> f64 {
    diff.norm_fro() / scale.max(f64::MIN_POSITIVE)
}

fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + &a.adjoint()).scale_real(0.5)
}

/// The Hermitian dilation of `H` built from its canonical pair.
///
/// With `G = S - Psi^dag Psi`:
/// `Sigma = Xi^-dag G`, `H1 = eta H`, `H2 = Psi^-dag Xi^dag`,
/// `H4 = -H2^dag Psi Xi^-1 - Sigma^-dag Psi^dag H2`, and
/// `H~ = [[H1, H2], [H2^dag, H4]]`. All inverses are applied through solves.
/// The result is verified before it is returned.
pub fn build_dilation(
    h: &CMatrix,
    canon: &CanonicalData,
    options: &DilationOptions,
    tol: &Tolerances,
) -> Result<DilationResult> {
    let n = h.rows();
    if !h.is_square() || canon.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{} but the canonical frame has dimension {}",
            h.rows(),
            h.cols(),
            canon.dim()
        )));
    }
    let (c, psi) = match options.scaling {
        FrameScaling::Auto => scale_frame(&canon.psi_prime, tol)?,
        FrameScaling::Fixed(c) => {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidInput(format!("scale {c} must be positive")));
            }
            (c, canon.psi_prime.scale_real(c))
        }
    };
    let xi = match &options.xi {
        Some(xi) if xi.shape() != (n, n) => {
            return Err(Error::DimensionMismatch(format!("Xi must be {n}x{n}")))
        }
        Some(xi) => xi.clone(),
        None => psi.clone(),
    };
    if linalg::rcond(&xi) < tol.rcond_floor {
        return Err(Error::InvalidInput("Xi is singular".into()));
    }
    let s = canon.s.clone();
    let j = canon.j();
    let psi_h = psi.adjoint();
    let xi_h = xi.adjoint();

    let g = &s - &(&psi_h * &psi);
    let g_rcond = linalg::rcond(&g);
    if g_rcond < tol.rcond_floor {
        return Err(Error::SingularFrame { rcond: g_rcond });
    }
    // Sigma = Xi^-dag G
    let sigma = linalg::solve(&xi_h, &g, tol)?;
    // eta = Psi^-dag S Psi^-1, evaluated as (Psi^-dag S) Psi^-1
    let psi_inv = linalg::inverse(&psi, tol)?;
    let eta = hermitian_part(&(&linalg::solve(&psi_h, &s, tol)? * &psi_inv));
    let h1 = hermitian_part(&(&eta * h));
    let h2 = linalg::solve(&psi_h, &xi_h, tol)?;
    // -H2^dag Psi Xi^-1 = -(Xi^-dag Psi^dag H2)^dag
    let first = linalg::solve(&xi_h, &(&psi_h * &h2), tol)?.adjoint();
    let second = linalg::solve(&sigma.adjoint(), &(&psi_h * &h2), tol)?;
    let h4 = hermitian_part(&-&(&first + &second));

    let h_tilde = CMatrix::block2x2(&h1, &h2, &h2.adjoint(), &h4);
    let result = DilationResult {
        h: h.clone(),
        h_tilde,
        psi_tilde: CMatrix::vstack(&psi, &xi),
        phi_tilde: CMatrix::vstack(&psi, &sigma),
        psi_prime: canon.psi_prime.clone(),
        psi,
        xi,
        sigma,
        eta,
        s,
        j,
        perm: canon.perm.clone(),
        c,
        h1,
        h2,
        h4,
    };
    result.verify(tol)?;
    Ok(result)
}

impl DilationResult {
    pub fn dim(&self) -> usize {
        self.psi.rows()
    }

    /// The defining identities, without the internal consistency checks.
    pub fn residuals(&self) -> DilationResiduals {
        let ht = &self.h_tilde;
        let phi_h = self.phi_tilde.adjoint();
        let (pn, fn_, hn) = (
            self.psi_tilde.norm_fro(),
            self.phi_tilde.norm_fro(),
            ht.norm_fro(),
        );
        let unhermitian = |a: &CMatrix| rel(&(a - &a.adjoint()), a.norm_fro());
        DilationResiduals {
            hermiticity: unhermitian(ht),
            overlap: rel(&(&(&phi_h * &self.psi_tilde) - &self.s), fn_ * pn),
            hamiltonian: rel(
                &(&(&(&phi_h * ht) * &self.psi_tilde) - &(&self.s * &self.j)),
                fn_ * hn * pn,
            ),
            h1_hermiticity: unhermitian(&(&self.eta * &self.h)),
        }
    }

    /// Re-check every identity the construction relies on.
    ///
    /// Besides the defining identities this ties each stored block back to
    /// `H`, `Psi`, `Xi` and `J`, so a bundle whose entries were altered after
    /// construction is rejected.
    pub fn verify(&self, tol: &Tolerances) -> Result<DilationResiduals> {
        let res = self.residuals();
        if !self.h_tilde.is_finite() || res.max() > tol.residual || res.max().is_nan() {
            return Err(Error::VerificationFailure(format!(
                "dilation identities violated: {res:?}"
            )));
        }
        let n = self.dim();
        let shapes_ok = self.h.shape() == (n, n)
            && self.h_tilde.shape() == (2 * n, 2 * n)
            && self.psi_tilde.shape() == (2 * n, n)
            && self.phi_tilde.shape() == (2 * n, n)
            && [&self.psi_prime, &self.xi, &self.sigma, &self.eta, &self.s, &self.j]
                .iter()
                .all(|m| m.shape() == (n, n))
            && self.perm.len() == n;
        if !shapes_ok {
            return Err(Error::VerificationFailure("inconsistent shapes".into()));
        }
        let psi_h = self.psi.adjoint();
        let g = &self.s - &(&psi_h * &self.psi);
        let checks: [(&str, CMatrix, f64); 10] = [
            (
                "H Psi = Psi J",
                &(&self.h * &self.psi) - &(&self.psi * &self.j),
                self.h.norm_fro() * self.psi.norm_fro(),
            ),
            (
                "Psi^dag eta Psi = S",
                &(&(&psi_h * &self.eta) * &self.psi) - &self.s,
                self.eta.norm_fro() * self.psi.norm_fro().powi(2),
            ),
            (
                "Psi = c Psi'",
                &self.psi - &self.psi_prime.scale_real(self.c),
                self.psi.norm_fro(),
            ),
            (
                "H1 = eta H",
                &self.h1 - &(&self.eta * &self.h),
                self.eta.norm_fro() * self.h.norm_fro(),
            ),
            (
                "Psi^dag H2 = Xi^dag",
                &(&psi_h * &self.h2) - &self.xi.adjoint(),
                self.psi.norm_fro() * self.h2.norm_fro(),
            ),
            (
                "Xi^dag Sigma = S - Psi^dag Psi",
                &(&self.xi.adjoint() * &self.sigma) - &g,
                self.xi.norm_fro() * self.sigma.norm_fro(),
            ),
            (
                "blocks of H~",
                &self.h_tilde - &CMatrix::block2x2(&self.h1, &self.h2, &self.h2.adjoint(), &self.h4),
                self.h_tilde.norm_fro(),
            ),
            (
                "Psi~ = [Psi; Xi]",
                &self.psi_tilde - &CMatrix::vstack(&self.psi, &self.xi),
                self.psi_tilde.norm_fro(),
            ),
            (
                "Phi~ = [Psi; Sigma]",
                &self.phi_tilde - &CMatrix::vstack(&self.psi, &self.sigma),
                self.phi_tilde.norm_fro(),
            ),
            (
                "S permutation",
                &self.s
                    - &CMatrix::from_fn(n, n, |i, k| {
                        if self.perm[i] == k {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    }),
                1.0,
            ),
        ];
        for (name, diff, scale) in checks {
            let r = rel(&diff, scale);
            if !(r <= tol.residual) {
                return Err(Error::VerificationFailure(format!(
                    "{name}: relative residual {r:.3e}"
                )));
            }
        }
        // Sigma^dag H4 = -Sigma^dag (Xi^-dag Psi^dag H2)^dag - Psi^dag H2
        let lhs = &self.sigma.adjoint() * &self.h4;
        let psi_h_h2 = &psi_h * &self.h2;
        let rhs_first = linalg::solve(&self.xi.adjoint(), &psi_h_h2, tol)?.adjoint();
        let rhs = -&(&(&self.sigma.adjoint() * &rhs_first) + &psi_h_h2);
        let r = rel(&(&lhs - &rhs), self.sigma.norm_fro() * self.h4.norm_fro().max(1.0));
        if !(r <= tol.residual) {
            return Err(Error::VerificationFailure(format!(
                "H4 block: relative residual {r:.3e}"
            )));
        }
        Ok(res)
    }
}

/// Column `i` of `Psi~` and `Phi~`, and `mu~_i = phi~_{s(i)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameVectors {
    pub psi_tilde: Vec<C64>,
    pub phi_tilde: Vec<C64>,
    pub mu_tilde: Vec<C64>,
}

/// Frame vectors for 0-based index `i`.
pub fn frame_vectors(d: &DilationResult, i: usize) -> Result<FrameVectors> {
    let n = d.dim();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    Ok(FrameVectors {
        psi_tilde: d.psi_tilde.column(i),
        phi_tilde: d.phi_tilde.column(i),
        mu_tilde: d.phi_tilde.column(d.perm[i]),
    })
}
