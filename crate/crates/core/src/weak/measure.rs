use serde::Serialize;

use crate::dilation::{frame_vectors, DilationResult};
use crate::error::{Error, Result};
use crate::linalg::{self, combine, dot, vec_norm, CMatrix, C64};
use crate::pt::CanonicalData;
use crate::tolerance::Tolerances;

/// `<v| eta |w>`.
pub fn eta_inner(v: &[C64], w: &[C64], eta: &CMatrix) -> Result<C64> {
    if v.len() != eta.rows() || w.len() != eta.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} against a {}x{} metric",
            v.len(),
            w.len(),
            eta.rows(),
            eta.cols()
        )));
    }
    Ok(dot(v, &eta.matvec(w)))
}

/// Observable, pre- and post-selected states, coupling `g` and pointer width.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakSetup {
    pub observable: CMatrix,
    pub pre: Vec<C64>,
    pub post: Vec<C64>,
    pub g: f64,
    pub pointer_width: f64,
}

impl WeakSetup {
    pub fn new(
        observable: CMatrix,
        pre: Vec<C64>,
        post: Vec<C64>,
        g: f64,
        pointer_width: f64,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = observable.rows();
        if !observable.is_square() || pre.len() != n || post.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "observable is {}x{}, pre has {} entries, post has {}",
                observable.rows(),
                observable.cols(),
                pre.len(),
                post.len()
            )));
        }
        if observable.hermiticity_defect() > tol.residual * observable.norm_max().max(1.0) {
            return Err(Error::InvalidInput("observable is not Hermitian".into()));
        }
        if !(pointer_width > 0.0 && pointer_width.is_finite()) || !g.is_finite() {
            return Err(Error::InvalidInput(format!(
                "pointer width {pointer_width} must be positive and g finite"
            )));
        }
        if pre.iter().chain(&post).any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("states must be finite".into()));
        }
        Ok(WeakSetup {
            observable,
            pre,
            post,
            g,
            pointer_width,
        })
    }

    /// `<post|pre>`, rejected when below the floor relative to the state norms.
    pub fn overlap(&self, tol: &Tolerances) -> Result<C64> {
        let overlap = dot(&self.post, &self.pre);
        let scale = vec_norm(&self.post) * vec_norm(&self.pre);
        if !(overlap.norm() > tol.overlap_floor * scale) {
            return Err(Error::VanishingOverlap {
                overlap: if scale > 0.0 { overlap.norm() / scale } else { 0.0 },
            });
        }
        Ok(overlap)
    }
}

/// `<post|A|pre> / <post|pre>`.
pub fn weak_value(setup: &WeakSetup, tol: &Tolerances) -> Result<C64> {
    let overlap = setup.overlap(tol)?;
    Ok(dot(&setup.post, &setup.observable.matvec(&setup.pre)) / overlap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectation {
    /// `<u|eta H|u> / <u|eta|u>` with `u = Psi a`.
    pub lhs: C64,
    /// `<u1~|H~|u2~> / <u1~|u2~>` in the dilation.
    pub rhs: C64,
}

/// Both sides of the expectation identity for `u = sum_i a_i psi_i`.
///
/// The right side pre-selects `u2~ = sum_i a_i psi~_i` and post-selects
/// `u1~ = sum_i a_{s(i)} mu~_i`.
pub fn expectation_eta(d: &DilationResult, a: &[C64], tol: &Tolerances) -> Result<Expectation> {
    let n = d.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for dimension {n}",
            a.len()
        )));
    }
    let psi_cols: Vec<Vec<C64>> = (0..n).map(|i| d.psi.column(i)).collect();
    let u = combine(a, &psi_cols);
    let eta_u = d.eta.matvec(&u);
    let norm = dot(&u, &eta_u);
    if norm.norm() <= tol.residual * d.eta.norm_fro() * dot(&u, &u).re {
        return Err(Error::NullEtaNorm);
    }
    let lhs = dot(&eta_u, &d.h.matvec(&u)) / norm;

    let frames = (0..n)
        .map(|i| frame_vectors(d, i))
        .collect::<Result<Vec<_>>>()?;
    let mus: Vec<Vec<C64>> = frames.iter().map(|f| f.mu_tilde.clone()).collect();
    let psis: Vec<Vec<C64>> = frames.iter().map(|f| f.psi_tilde.clone()).collect();
    let a_swapped: Vec<C64> = (0..n).map(|i| a[d.perm[i]]).collect();
    let u1 = combine(&a_swapped, &mus);
    let u2 = combine(a, &psis);
    let rhs = dot(&u1, &d.h_tilde.matvec(&u2)) / dot(&u1, &u2);
    Ok(Expectation { lhs, rhs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseOutcome {
    pub detected_value: f64,
    pub post_state: Vec<C64>,
    /// `(i, s(i))`, 0-based.
    pub pair: (usize, usize),
}

/// The state `u = sum_j a_j psi_j` conditioned on outcome `i`.
///
/// For `i != s(i)` with `z = a_i conj(a_{s(i)})` the detected value is
/// `2 Re(z lambda_i) / 2 Re(z)` and the state becomes
/// `(a_i psi_i + a_{s(i)} psi_{s(i)}) / |2 Re z|^{1/2}`. For `i = s(i)` it is
/// `lambda_i` and `a_i psi_i / |a_i|`; either way the eta-norm of the post
/// state has modulus one.
pub fn collapse(canon: &CanonicalData, a: &[C64], i: usize, tol: &Tolerances) -> Result<CollapseOutcome> {
    let n = canon.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for dimension {n}",
            a.len()
        )));
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let si = canon.perm[i];
    let lambda = canon.eigenvalues()[i];
    let psi_i = canon.psi_prime.column(i);
    let (ai, asi) = (a[i], a[si]);
    if si == i {
        if ai.norm() == 0.0 {
            return Err(Error::NullDenominator);
        }
        let f = ai / ai.norm();
        return Ok(CollapseOutcome {
            detected_value: lambda.re,
            post_state: psi_i.iter().map(|&x| x * f).collect(),
            pair: (i, si),
        });
    }
    let z = ai * asi.conj();
    let den = 2.0 * z.re;
    if !(den.abs() > tol.residual * 2.0 * ai.norm() * asi.norm()) {
        return Err(Error::NullDenominator);
    }
    let detected_value = 2.0 * (z * lambda).re / den;
    let psi_s = canon.psi_prime.column(si);
    let scale = 1.0 / den.abs().sqrt();
    let post_state = psi_i
        .iter()
        .zip(&psi_s)
        .map(|(&x, &y)| (ai * x + asi * y) * scale)
        .collect();
    Ok(CollapseOutcome {
        detected_value,
        post_state,
        pair: (i, si),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallTimePair {
    /// `<phi~_i| e^{-itH~} |psi~_j>`
    pub tilde: C64,
    /// `<psi_i| eta e^{-itH} |psi_j>`
    pub eta_side: C64,
}

/// All `n x n` entries of both sides at once: `Phi~^dag e^{-itH~} Psi~` and
/// `Psi^dag eta e^{-itH} Psi`.
pub fn small_time_matrices(d: &DilationResult, t: f64, tol: &Tolerances) -> Result<(CMatrix, CMatrix)> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time {t} must be nonnegative")));
    }
    let tilde = &(&d.phi_tilde.adjoint() * &linalg::evolution(&d.h_tilde, t, tol)?) * &d.psi_tilde;
    let eta_side =
        &(&(&d.psi.adjoint() * &d.eta) * &linalg::evolution(&d.h, t, tol)?) * &d.psi;
    Ok((tilde, eta_side))
}

pub fn small_time_pair(
    d: &DilationResult,
    i: usize,
    j: usize,
    t: f64,
    tol: &Tolerances,
) -> Result<SmallTimePair> {
    let n = d.dim();
    for index in [i, j] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, dim: n });
        }
    }
    let (tilde, eta_side) = small_time_matrices(d, t, tol)?;
    Ok(SmallTimePair {
        tilde: tilde[(i, j)],
        eta_side: eta_side[(i, j)],
    })
}
