//! Numerical thresholds shared by every module.

/// Environment variable that overrides [`Tolerances::residual`].
pub const TOLERANCE_ENV: &str = "PTSIM_TOL";

/// Thresholds threaded through all routines.
///
/// Relative quantities are scaled by the relevant matrix norms at the point
/// of use; see the individual fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative residual accepted for identities such as `Psi^-1 H Psi = J`.
    pub residual: f64,
    /// Reciprocal condition number below which a matrix is treated as singular.
    pub rcond_floor: f64,
    /// Minimum separation of distinct eigenvalues, relative to `max(1, ||H||)`.
    pub cluster_gap: f64,
    /// Largest eigenvector-matrix condition number still called diagonalizable.
    pub max_condition: f64,
    /// Relative distance within which `mu` is accepted as `conj(lambda)`.
    pub pairing: f64,
    /// Smallest admissible `|<post|pre>|` for a weak value.
    pub overlap_floor: f64,
    /// Largest 1-norm accepted by the matrix exponential.
    pub expm_norm_bound: f64,
    /// Iteration budget per eigenvalue for the QR algorithm.
    pub qr_iterations_per_eigenvalue: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-10,
            rcond_floor: 1e-12,
            cluster_gap: 1e-6,
            max_condition: 1e8,
            pairing: 1e-8,
            overlap_floor: 1e-10,
            expm_norm_bound: 1e6,
            qr_iterations_per_eigenvalue: 60,
        }
    }
}

impl Tolerances {
    /// Defaults with `residual` taken from `PTSIM_TOL` when it parses as a positive number.
    pub fn from_env() -> Self {
        let mut tol = Tolerances::default();
        if let Some(v) = std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            tol.residual = v;
        }
        tol
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }
}
