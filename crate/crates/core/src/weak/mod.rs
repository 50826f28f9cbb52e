//! Weak measurement on the dilated system: eta inner products, weak values,
//! the expectation identity, the collapse rule, Gaussian pointer states and
//! the small-time evolution comparison.

mod measure;
mod pointer;

pub use measure::{
    collapse, eta_inner, expectation_eta, small_time_matrices, small_time_pair, weak_value,
    CollapseOutcome, Expectation, SmallTimePair, WeakSetup,
};
pub use pointer::{
    gaussian, pointer_exact, pointer_weak_approx, unconditioned_probability, PointerDistribution,
    PointerGrid, PointerTerm, DEFAULT_GRID_MARGIN, DEFAULT_GRID_POINTS,
};
