//! Canonical pairs `(J, S)`: a frame `Psi'` with `Psi'^-1 H Psi' = J` in
//! conjugate-paired Jordan form and `Psi'^dag eta Psi' = S`, the sip-matrix
//! direct sum carrying the metric's signature.

use serde::Serialize;

use super::classify::clusters;
use super::system::{validate_pt, PTSystem};
use crate::error::{Error, Result};
use crate::linalg::{self, vec_norm, CMatrix, C64, ONE, ZERO};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanBlock {
    pub eigenvalue: C64,
    pub size: usize,
    /// Index of the conjugate partner block, for non-real eigenvalues.
    pub paired_with: Option<usize>,
}

impl JordanBlock {
    pub fn real(eigenvalue: f64, size: usize) -> Self {
        JordanBlock {
            eigenvalue: C64::new(eigenvalue, 0.0),
            size,
            paired_with: None,
        }
    }

    /// Adjacent blocks `J_size(lambda)`, `J_size(conj(lambda))` starting at block index `at`.
    pub fn pair(lambda: C64, size: usize, at: usize) -> [Self; 2] {
        [
            JordanBlock {
                eigenvalue: lambda,
                size,
                paired_with: Some(at + 1),
            },
            JordanBlock {
                eigenvalue: lambda.conj(),
                size,
                paired_with: Some(at),
            },
        ]
    }
}

/// The `k x k` anti-diagonal matrix of ones.
pub fn sip(k: usize) -> CMatrix {
    CMatrix::from_fn(k, k, |i, j| if i + j + 1 == k { ONE } else { ZERO })
}

/// `k x k` Jordan block with `lambda` on the diagonal and ones above it.
pub fn jordan_block(lambda: C64, k: usize) -> CMatrix {
    CMatrix::from_fn(k, k, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            ONE
        } else {
            ZERO
        }
    })
}

pub fn jordan_matrix(blocks: &[JordanBlock]) -> CMatrix {
    let parts: Vec<CMatrix> = blocks
        .iter()
        .map(|b| jordan_block(b.eigenvalue, b.size))
        .collect();
    CMatrix::direct_sum(&parts)
}

/// `S` and the index permutation it induces (`S e_i = e_perm[i]`).
///
/// A conjugate pair of size-`k` blocks contributes `S_{2k}`, a real block `S_k`.
pub fn sip_structure(blocks: &[JordanBlock], tol: &Tolerances) -> Result<(CMatrix, Vec<usize>)> {
    let mut parts = Vec::new();
    let mut k = 0;
    while k < blocks.len() {
        let b = &blocks[k];
        if b.size == 0 {
            return Err(Error::InvalidInput(format!("block {k} has size 0")));
        }
        let scale = b.eigenvalue.norm().max(1.0);
        match b.paired_with {
            None => {
                if b.eigenvalue.im.abs() > tol.pairing * scale {
                    return Err(Error::UnsupportedStructure(format!(
                        "block {k} has non-real eigenvalue {} but no partner",
                        b.eigenvalue
                    )));
                }
                parts.push(sip(b.size));
                k += 1;
            }
            Some(p) => {
                let partner = blocks.get(k + 1).filter(|_| p == k + 1).ok_or_else(|| {
                    Error::UnsupportedStructure(format!(
                        "block {k} must be immediately followed by its partner"
                    ))
                })?;
                if partner.paired_with != Some(k)
                    || partner.size != b.size
                    || (partner.eigenvalue - b.eigenvalue.conj()).norm() > tol.pairing * scale
                {
                    return Err(Error::UnsupportedStructure(format!(
                        "blocks {k} and {} are not a conjugate pair",
                        k + 1
                    )));
                }
                parts.push(sip(2 * b.size));
                k += 2;
            }
        }
    }
    let s = CMatrix::direct_sum(&parts);
    let perm = (0..s.rows())
        .map(|i| (0..s.cols()).find(|&j| s[(i, j)] == ONE).expect("permutation row"))
        .collect();
    Ok((s, perm))
}

/// Residuals of the canonical identities, each relative to the natural scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalResiduals {
    /// `||H Psi' - Psi' J|| / (||H|| ||Psi'||)`
    pub similarity: f64,
    /// `||Psi'^-1 H Psi' - J|| / ||H||`
    pub jordan: f64,
    /// `||Psi'^dag eta Psi' - S|| / (||eta|| ||Psi'||^2)`
    pub metric: f64,
    /// `||H^dag eta - eta H|| / (||H|| ||eta||)`
    pub pseudo_hermiticity: f64,
    /// `||eta - eta^dag|| / ||eta||`
    pub eta_hermiticity: f64,
}

impl CanonicalResiduals {
    /// The backward-error residuals used as the construction gate.
    pub fn max_backward(&self) -> f64 {
        self.similarity
            .max(self.metric)
            .max(self.pseudo_hermiticity)
            .max(self.eta_hermiticity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalData {
    pub psi_prime: CMatrix,
    pub blocks: Vec<JordanBlock>,
    pub s: CMatrix,
    pub perm: Vec<usize>,
    pub eta: CMatrix,
    /// Metric sign per block; always +1 for accepted data.
    pub epsilons: Vec<i8>,
}

impl CanonicalData {
    pub fn dim(&self) -> usize {
        self.psi_prime.rows()
    }

    pub fn j(&self) -> CMatrix {
        jordan_matrix(&self.blocks)
    }

    /// Diagonal of `J`, one entry per frame column.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.eigenvalue, b.size))
            .collect()
    }

    pub fn is_identity_metric(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Accept a caller-supplied frame and Jordan structure, verifying every identity.
    ///
    /// Without `eta`, the metric is `(Psi'^-1)^dag S Psi'^-1`. With `eta`, the
    /// frame must already bring it to `S`; a block where it brings it to `-S`
    /// is rejected with [`Error::NegativeEpsilon`].
    pub fn from_parts(
        h: &CMatrix,
        psi_prime: CMatrix,
        blocks: Vec<JordanBlock>,
        eta: Option<CMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = h.rows();
        if !h.is_square() || psi_prime.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "frame must be {n}x{n} to match H"
            )));
        }
        let total: usize = blocks.iter().map(|b| b.size).sum();
        if total != n {
            return Err(Error::DimensionMismatch(format!(
                "Jordan blocks cover {total} columns, H has {n}"
            )));
        }
        let (s, perm) = sip_structure(&blocks, tol)?;
        let epsilons = match &eta {
            Some(eta) => metric_signs(&psi_prime, eta, &blocks)?,
            None => vec![1; blocks.len()],
        };
        let eta = match eta {
            Some(eta) => eta,
            None => canonical_metric(&psi_prime, &s, tol)?,
        };
        let data = CanonicalData {
            psi_prime,
            blocks,
            s,
            perm,
            eta,
            epsilons,
        };
        let res = data.residuals(h, tol)?;
        if res.max_backward() > tol.residual {
            return Err(Error::VerificationFailure(format!(
                "canonical identities violated: {res:?}"
            )));
        }
        Ok(data)
    }

    pub fn residuals(&self, h: &CMatrix, tol: &Tolerances) -> Result<CanonicalResiduals> {
        let j = self.j();
        let psi = &self.psi_prime;
        let hn = h.norm_fro().max(f64::MIN_POSITIVE);
        let pn = psi.norm_fro();
        let en = self.eta.norm_fro().max(f64::MIN_POSITIVE);
        let similarity = (&(h * psi) - &(psi * &j)).norm_fro() / (hn * pn);
        let jordan = (&linalg::solve(psi, &(h * psi), tol)? - &j).norm_fro() / hn;
        let metric = (&(&(&psi.adjoint() * &self.eta) * psi) - &self.s).norm_fro() / (en * pn * pn);
        let pseudo_hermiticity =
            (&(&h.adjoint() * &self.eta) - &(&self.eta * h)).norm_fro() / (hn * en);
        Ok(CanonicalResiduals {
            similarity,
            jordan,
            metric,
            pseudo_hermiticity,
            eta_hermiticity: self.eta.hermiticity_defect() * self.eta.norm_fro().max(1.0) / en,
        })
    }
}

/// `(Psi^-1)^dag S Psi^-1`, symmetrized.
pub fn canonical_metric(psi: &CMatrix, s: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let psi_inv = linalg::inverse(psi, tol)?;
    let eta = &(&psi_inv.adjoint() * s) * &psi_inv;
    Ok((&eta + &eta.adjoint()).scale_real(0.5))
}

/// Metric sign of each block, read from `Psi'^dag eta Psi'`.
fn metric_signs(psi: &CMatrix, eta: &CMatrix, blocks: &[JordanBlock]) -> Result<Vec<i8>> {
    let g = &(&psi.adjoint() * eta) * psi;
    let mut signs = Vec::with_capacity(blocks.len());
    let mut start = 0;
    for (k, b) in blocks.iter().enumerate() {
        let sign = match b.paired_with {
            None => {
                let entry = g[(start, start + b.size - 1)].re;
                if entry < 0.0 {
                    return Err(Error::NegativeEpsilon { block: k });
                }
                1
            }
            Some(_) => 1,
        };
        signs.push(sign);
        start += b.size;
    }
    Ok(signs)
}

fn normalized(v: Vec<C64>) -> Vec<C64> {
    let n = vec_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Canonical pair of a diagonalizable PT-symmetric Hamiltonian.
///
/// Eigenvalues must be pairwise separated by `tol.cluster_gap * max(1, ||H||)`;
/// defective or degenerate spectra are rejected with
/// [`Error::UnsupportedStructure`] (supply the structure through
/// [`CanonicalData::from_parts`] instead). Conjugate pairs come first,
/// ordered by ascending real then imaginary part of the member with positive
/// imaginary part; real eigenvalues follow in ascending order. The partner
/// column of a pair is the PT image of the first.
///
/// With `eta_hint` the frame columns are rescaled so that
/// `Psi'^dag eta Psi' = S` exactly; without it the metric is built from the
/// unit-norm frame.
pub fn canonical_pair(
    sys: &PTSystem,
    eta_hint: Option<&CMatrix>,
    tol: &Tolerances,
) -> Result<CanonicalData> {
    let report = validate_pt(sys, tol)?;
    if !report.pass {
        return Err(Error::InvalidInput(format!(
            "operators do not form a PT-symmetric system: {:?}",
            report.relations.iter().filter(|r| !r.pass).collect::<Vec<_>>()
        )));
    }
    let h = &sys.h;
    let n = h.rows();
    let scale = h.norm_fro().max(1.0);
    let eig = linalg::eig(h, tol)?;
    let values = &eig.eigenvalues;

    if clusters(values, tol.cluster_gap * scale).iter().any(|g| g.len() > 1) {
        return Err(Error::UnsupportedStructure(
            "eigenvalues are not separated by the cluster gap (degenerate or defective spectrum)"
                .into(),
        ));
    }
    if eig.condition_estimate > tol.max_condition {
        return Err(Error::UnsupportedStructure(format!(
            "eigenvector matrix condition {:.3e} exceeds {:.3e}",
            eig.condition_estimate, tol.max_condition
        )));
    }

    let imag_tol = tol.pairing * scale;
    let mut used = vec![false; n];
    let mut pairs: Vec<(C64, usize)> = Vec::new();
    let mut reals: Vec<(f64, usize)> = Vec::new();
    for k in 0..n {
        if values[k].im.abs() <= imag_tol {
            reals.push((values[k].re, k));
            used[k] = true;
        }
    }
    let mut upper: Vec<usize> = (0..n).filter(|&k| !used[k] && values[k].im > 0.0).collect();
    upper.sort_by(|&a, &b| {
        values[a]
            .re
            .total_cmp(&values[b].re)
            .then(values[a].im.total_cmp(&values[b].im))
    });
    for &k in &upper {
        used[k] = true;
        let target = values[k].conj();
        let partner = (0..n)
            .filter(|&m| !used[m])
            .min_by(|&a, &b| (values[a] - target).norm().total_cmp(&(values[b] - target).norm()))
            .filter(|&m| (values[m] - target).norm() <= imag_tol)
            .ok_or_else(|| {
                Error::UnsupportedStructure(format!(
                    "eigenvalue {} has no conjugate partner; H is not pseudo-Hermitian",
                    values[k]
                ))
            })?;
        used[partner] = true;
        let lambda = (values[k] + values[partner].conj()) * 0.5;
        pairs.push((lambda, k));
    }
    if let Some(k) = (0..n).find(|&k| !used[k]) {
        return Err(Error::UnsupportedStructure(format!(
            "eigenvalue {} has no conjugate partner; H is not pseudo-Hermitian",
            values[k]
        )));
    }
    reals.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut blocks = Vec::with_capacity(n);
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for &(lambda, k) in &pairs {
        let v = eig.right_vectors.column(k);
        let w = normalized(sys.apply_pt(&v));
        blocks.extend(JordanBlock::pair(lambda, 1, blocks.len()));
        columns.push(v);
        columns.push(w);
    }
    for &(lambda, k) in &reals {
        blocks.push(JordanBlock::real(lambda, 1));
        columns.push(eig.right_vectors.column(k));
    }

    let eta = match eta_hint {
        None => None,
        Some(eta) => {
            check_metric(h, eta, tol)?;
            rescale_to_metric(&mut columns, &blocks, eta)?;
            Some(eta.clone())
        }
    };
    let psi_prime = CMatrix::from_columns(&columns);
    CanonicalData::from_parts(h, psi_prime, blocks, eta, tol)
}

fn check_metric(h: &CMatrix, eta: &CMatrix, tol: &Tolerances) -> Result<()> {
    if eta.shape() != h.shape() {
        return Err(Error::DimensionMismatch("metric must match H".into()));
    }
    if !eta.is_hermitian(tol.residual) {
        return Err(Error::InvalidMetric("eta is not Hermitian".into()));
    }
    let defect = (&(&h.adjoint() * eta) - &(eta * h)).norm_fro()
        / (h.norm_fro().max(1.0) * eta.norm_fro().max(f64::MIN_POSITIVE));
    if defect > tol.residual {
        return Err(Error::InvalidMetric(format!(
            "H^dag eta != eta H (relative defect {defect:.3e})"
        )));
    }
    if linalg::rcond(eta) < tol.rcond_floor {
        return Err(Error::InvalidMetric("eta is singular".into()));
    }
    Ok(())
}

/// Rescale columns so that `Psi'^dag eta Psi'` becomes `S` (simple blocks only).
fn rescale_to_metric(columns: &mut [Vec<C64>], blocks: &[JordanBlock], eta: &CMatrix) -> Result<()> {
    let gram = |a: &[C64], b: &[C64]| linalg::dot(a, &eta.matvec(b));
    let mut k = 0;
    while k < blocks.len() {
        match blocks[k].paired_with {
            None => {
                let g = gram(&columns[k], &columns[k]).re;
                if g.abs() < f64::EPSILON {
                    return Err(Error::InvalidMetric(format!(
                        "eigenvector {k} is eta-null"
                    )));
                }
                if g < 0.0 {
                    return Err(Error::NegativeEpsilon { block: k });
                }
                let f = 1.0 / g.sqrt();
                columns[k].iter_mut().for_each(|z| *z *= f);
                k += 1;
            }
            Some(_) => {
                let g = gram(&columns[k], &columns[k + 1]);
                if g.norm() < f64::EPSILON {
                    return Err(Error::InvalidMetric(format!(
                        "eigenvector pair ({k}, {}) is eta-orthogonal",
                        k + 1
                    )));
                }
                let f = ONE / g;
                columns[k + 1].iter_mut().for_each(|z| *z *= f);
                k += 2;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn diagonal_real_hamiltonian() {
        let h = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let sys = PTSystem::new(h.clone(), CMatrix::identity(2), CMatrix::identity(2)).unwrap();
        let c = canonical_pair(&sys, Some(&CMatrix::identity(2)), &tol()).unwrap();
        assert!(c.psi_prime.max_abs_diff(&CMatrix::identity(2)) < 1e-15
            || c.psi_prime.map(|z| C64::new(z.norm(), 0.0)).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        assert!(c.j().max_abs_diff(&h) < 1e-15);
        assert_eq!(c.s, CMatrix::identity(2));
        assert!(c.is_identity_metric());
    }

    #[test]
    fn sip_structure_for_mixed_blocks() {
        let mut blocks = JordanBlock::pair(C64::new(1.0, 2.0), 2, 0).to_vec();
        blocks.push(JordanBlock::real(3.0, 1));
        let (s, perm) = sip_structure(&blocks, &tol()).unwrap();
        assert_eq!(perm, vec![3, 2, 1, 0, 4]);
        assert_eq!(&s * &s, CMatrix::identity(5));
        assert_eq!(s, s.transpose());
    }

    #[test]
    fn unpaired_complex_block_rejected() {
        let blocks = vec![JordanBlock {
            eigenvalue: I,
            size: 1,
            paired_with: None,
        }];
        assert!(matches!(
            sip_structure(&blocks, &tol()),
            Err(Error::UnsupportedStructure(_))
        ));
    }

    #[test]
    fn jordan_metric_satisfies_pseudo_hermiticity() {
        // J^dag S = S J holds blockwise for conjugate-paired Jordan blocks
        let mut blocks = JordanBlock::pair(C64::new(0.3, 1.1), 2, 0).to_vec();
        blocks.push(JordanBlock::real(-0.5, 2));
        let j = jordan_matrix(&blocks);
        let (s, _) = sip_structure(&blocks, &tol()).unwrap();
        assert!((&j.adjoint() * &s).max_abs_diff(&(&s * &j)) < 1e-15);
    }

    #[test]
    fn negative_signature_rejected() {
        let h = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let eta = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let sys = PTSystem::new(h.clone(), CMatrix::identity(2), CMatrix::identity(2)).unwrap();
        assert_eq!(
            canonical_pair(&sys, Some(&eta), &tol()),
            Err(Error::NegativeEpsilon { block: 1 })
        );
        let err = CanonicalData::from_parts(
            &h,
            CMatrix::identity(2),
            vec![JordanBlock::real(1.0, 1), JordanBlock::real(2.0, 1)],
            Some(eta),
            &tol(),
        );
        assert_eq!(err, Err(Error::NegativeEpsilon { block: 1 }));
    }

    #[test]
    fn defective_input_rejected_on_generic_path() {
        let h = CMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]);
        let sys = PTSystem::new(h, CMatrix::identity(2), CMatrix::identity(2)).unwrap();
        assert!(matches!(
            canonical_pair(&sys, None, &tol()),
            Err(Error::UnsupportedStructure(_))
        ));
    }

    #[test]
    fn defective_input_accepted_from_parts() {
        let h = CMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]);
        let c = CanonicalData::from_parts(
            &h,
            CMatrix::identity(2),
            vec![JordanBlock::real(2.0, 2)],
            None,
            &tol(),
        )
        .unwrap();
        assert_eq!(c.s, sip(2));
        assert_eq!(c.perm, vec![1, 0]);
    }
}
