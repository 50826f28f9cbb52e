//! Dense complex linear algebra: arithmetic, solves, eigen-decomposition,
//! singular values and the matrix exponential.

mod eig;
mod expm;
mod lu;
mod matrix;
mod svd;

pub use eig::{eig, eigh, schur, EigResult, Schur};
pub use expm::{evolution, expm};
pub use lu::{determinant, inverse, rcond, solve, Lu};
pub use matrix::{combine, dot, vec_norm, CMatrix, C64, I, ONE, ZERO};
pub use svd::{condition_number, numerical_rank, singular_values};

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// Hermitian square root of a Hermitian positive semi-definite matrix.
pub fn hermitian_sqrt(a: &CMatrix, tol: &crate::Tolerances) -> crate::Result<CMatrix> {
    let (values, vectors) = eigh(a, tol)?;
    if let Some(v) = values.iter().find(|&&v| v < -tol.residual * a.norm_fro().max(1.0)) {
        return Err(crate::Error::InvalidInput(format!(
            "matrix is not positive semi-definite (eigenvalue {v:.3e})"
        )));
    }
    let roots: Vec<C64> = values.iter().map(|v| C64::new(v.max(0.0).sqrt(), 0.0)).collect();
    Ok(&(&vectors * &CMatrix::from_diag(&roots)) * &vectors.adjoint())
}
