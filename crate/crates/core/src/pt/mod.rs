//! PT systems: validation, broken/unbroken classification and canonical pairs.

mod bender;
mod canonical;
mod classify;
mod system;

pub use bender::{bender_model, BenderDilation, BenderModel};
pub use canonical::{
    canonical_metric, canonical_pair, jordan_block, jordan_matrix, sip, sip_structure,
    CanonicalData, CanonicalResiduals, JordanBlock,
};
pub use classify::{classify, classify_detailed, clusters, Classification, Symmetry};
pub use system::{
    validate_pt, PTSystem, Relation, ValidationReport, PARITY_INVOLUTION, PT_COMMUTE,
    PT_SYMMETRY, TIME_INVOLUTION,
};
