use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Every variant corresponds to a concrete failure mode of one of the
/// numerical routines; none are used for control flow.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular (reciprocal condition {rcond:.3e} below floor)")]
    SingularMatrix { rcond: f64 },
    #[error("eigenvalue iteration did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("matrix 1-norm {norm:.3e} exceeds the exponential bound {bound:.3e}")]
    OverflowRisk { norm: f64, bound: f64 },
    #[error("unsupported spectral structure: {0}")]
    UnsupportedStructure(String),
    #[error("metric has sign -1 on block {block}; only +1 signatures are supported")]
    NegativeEpsilon { block: usize },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("exceptional point: delta = {delta:.3e}")]
    ExceptionalPoint { delta: f64 },
    #[error("model is in the unbroken regime (delta = {delta:.3e} > 0)")]
    UnbrokenRegime { delta: f64 },
    #[error("S - Psi^dag Psi is numerically singular (rcond {rcond:.3e}); rescale the frame")]
    SingularFrame { rcond: f64 },
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    #[error("broken PT symmetry: no isometric embedding exists")]
    BrokenSymmetry,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("pre/post-selection overlap {overlap:.3e} is below the floor")]
    VanishingOverlap { overlap: f64 },
    #[error("eta-norm of the state vanishes")]
    NullEtaNorm,
    #[error("collapse denominator vanishes")]
    NullDenominator,
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// The variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite { .. } => "NonFinite",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::OverflowRisk { .. } => "OverflowRisk",
            Error::UnsupportedStructure(_) => "UnsupportedStructure",
            Error::NegativeEpsilon { .. } => "NegativeEpsilon",
            Error::InvalidMetric(_) => "InvalidMetric",
            Error::ExceptionalPoint { .. } => "ExceptionalPoint",
            Error::UnbrokenRegime { .. } => "UnbrokenRegime",
            Error::SingularFrame { .. } => "SingularFrame",
            Error::VerificationFailure(_) => "VerificationFailure",
            Error::BrokenSymmetry => "BrokenSymmetry",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::VanishingOverlap { .. } => "VanishingOverlap",
            Error::NullEtaNorm => "NullEtaNorm",
            Error::NullDenominator => "NullDenominator",
            Error::RegimeViolation(_) => "RegimeViolation",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
