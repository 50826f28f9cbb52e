//! Hermitian dilations of PT-symmetric (pseudo-Hermitian) Hamiltonians and
//! a weak-measurement simulation of broken-PT systems.
//!
//! An `n x n` PT-symmetric Hamiltonian `H` with metric `eta` is embedded into
//! a `2n x 2n` Hermitian `H_tilde` together with two frames `Psi_tilde`,
//! `Phi_tilde` such that `Phi_tilde^dag Psi_tilde = S` and
//! `Phi_tilde^dag H_tilde Psi_tilde = S J`, with `J` the canonical (Jordan)
//! form of `H` and `S` the permutation carrying the metric's signature.
//! Pre-selecting `psi_tilde_i` and post-selecting its partner then reads out
//! complex eigenvalues, eta-expectations and the collapse rule of `H` as weak
//! values of the ordinary Hermitian `H_tilde`.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex kernels (solve, eig, expm, singular values).
//! - [`pt`]: PT systems, broken/unbroken classification, canonical pairs
//!   `(J, S)` and the closed-form two-level model.
//! - [`dilation`]: the Hermitian dilation and the unbroken isometric embedding.
//! - [`weak`]: eta inner products, weak values, expectation identity,
//!   collapse, Gaussian pointer states and small-time evolution.
//! - [`repro`]: Z-parameter grids and the unbroken closed-form check.
//! - [`io`] and [`cli`]: JSON/CSV formats and the `ptsim` command line.
//!
//! Library indices are 0-based; the command line uses 1-based indices.

pub mod cli;
pub mod dilation;
mod error;
pub mod io;
pub mod linalg;
pub mod pt;
pub mod random;
pub mod repro;
mod tolerance;
pub mod weak;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use tolerance::{Tolerances, TOLERANCE_ENV};
