//! Complex Schur decomposition and the eigen-solvers built on it.
//!
//! The general path is Householder reduction to upper Hessenberg form
//! followed by single-shift complex QR with Wilkinson shifts and Givens
//! rotations. Eigenvectors come from back-substitution on the triangular
//! factor. Hermitian input takes the Schur vectors directly, which keeps
//! them orthonormal even inside degenerate clusters.

use super::matrix::{vec_norm, CMatrix, C64, ONE, ZERO};
use super::svd::condition_number;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const EPS: f64 = f64::EPSILON;

/// `A = Z T Z^dag` with `T` upper triangular and `Z` unitary.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: CMatrix,
    pub z: CMatrix,
}

#[derive(Debug, Clone)]
pub struct EigResult {
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors, column `k` paired with `eigenvalues[k]`.
    pub right_vectors: CMatrix,
    /// 2-norm condition number of `right_vectors`.
    pub condition_estimate: f64,
}

impl EigResult {
    /// Largest `||A v - lambda v|| / (||A|| ||v||)` over all pairs.
    pub fn max_relative_residual(&self, a: &CMatrix) -> f64 {
        let scale = a.norm_fro().max(f64::MIN_POSITIVE);
        (0..self.eigenvalues.len())
            .map(|k| {
                let v = self.right_vectors.column(k);
                let av = a.matvec(&v);
                let r: Vec<C64> = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| x - self.eigenvalues[k] * y)
                    .collect();
                vec_norm(&r) / (scale * vec_norm(&v))
            })
            .fold(0.0, f64::max)
    }
}

struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    /// Rotation `G` with `G [a; b] = [r; 0]`.
    fn zeroing(a: C64, b: C64) -> Givens {
        let na = a.norm();
        let nb = b.norm();
        if nb == 0.0 {
            return Givens { c: 1.0, s: ZERO };
        }
        if na == 0.0 {
            return Givens { c: 0.0, s: ONE };
        }
        let norm = na.hypot(nb);
        Givens {
            c: na / norm,
            s: (a / na) * b.conj() / norm,
        }
    }

    fn apply_rows(&self, m: &mut CMatrix, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let x = m[(k, j)];
            let y = m[(k + 1, j)];
            m[(k, j)] = x * self.c + self.s * y;
            m[(k + 1, j)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Right-multiply columns `k, k+1` by `G^dag`.
    fn apply_cols(&self, m: &mut CMatrix, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * self.c + y * self.s.conj();
            m[(i, k + 1)] = -x * self.s + y * self.c;
        }
    }
}

fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut z = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            ONE
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|e| *e /= vnorm);

        for j in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s * 2.0;
            }
        }
        for m in [&mut h, &mut z] {
            for i in 0..n {
                let s: C64 = v
                    .iter()
                    .enumerate()
                    .map(|(j, vj)| m[(i, k + 1 + j)] * vj)
                    .sum();
                for (j, vj) in v.iter().enumerate() {
                    m[(i, k + 1 + j)] -= s * vj.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, z)
}

fn wilkinson_shift(h: &CMatrix, hi: usize) -> C64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Complex Schur form of a square matrix.
pub fn schur(a: &CMatrix, tol: &Tolerances) -> Result<Schur> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    let anorm = h.norm_fro().max(f64::MIN_POSITIVE);
    let budget = tol.qr_iterations_per_eigenvalue * n.max(1);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n.saturating_sub(1);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if scale == 0.0 {
                scale = anorm;
            }
            if sub <= EPS * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(Error::ConvergenceFailure { iterations: total });
        }

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let g = Givens::zeroing(h[(k, k)], h[(k + 1, k)]);
            g.apply_rows(&mut h, k, k..n);
            h[(k + 1, k)] = ZERO;
            rotations.push(g);
        }
        for (offset, g) in rotations.iter().enumerate() {
            let k = lo + offset;
            g.apply_cols(&mut h, k, 0..(k + 2).min(hi + 1));
            g.apply_cols(&mut z, k, 0..n);
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }

    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { t: h, z })
}

/// Eigenvalues and unit-norm right eigenvectors of a general square matrix.
pub fn eig(a: &CMatrix, tol: &Tolerances) -> Result<EigResult> {
    let Schur { t, z } = schur(a, tol)?;
    let n = t.rows();
    let tnorm = t.norm_fro();
    let smin = (EPS * tnorm).max(f64::MIN_POSITIVE);
    let mut vectors = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut x = vec![ZERO; n];
        x[k] = ONE;
        for i in (0..k).rev() {
            let s: C64 = (i + 1..=k).map(|j| t[(i, j)] * x[j]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            x[i] = -s / denom;
        }
        let mut v = z.matvec(&x);
        let norm = vec_norm(&v);
        v.iter_mut().for_each(|e| *e /= norm);
        vectors.set_column(k, &v);
    }
    let condition_estimate = condition_number(&vectors);
    Ok(EigResult {
        eigenvalues: t.diagonal(),
        right_vectors: vectors,
        condition_estimate,
    })
}

/// Hermitian eigen-decomposition: ascending real eigenvalues and orthonormal eigenvectors.
pub fn eigh(a: &CMatrix, tol: &Tolerances) -> Result<(Vec<f64>, CMatrix)> {
    let sym = (a + &a.adjoint()).scale_real(0.5);
    let Schur { t, z } = schur(&sym, tol)?;
    let n = t.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| t[(i, i)].re.total_cmp(&t[(j, j)].re));
    let values = order.iter().map(|&k| t[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| z[(i, order[j])]);
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::I;

    fn sorted_by_re_im(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_input() {
        let tol = Tolerances::default();
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let e = eig(&a, &tol).unwrap();
        let ev = sorted_by_re_im(e.eigenvalues.clone());
        assert!((ev[0] - 1.0).norm() < 1e-14 && (ev[1] - 2.0).norm() < 1e-14);
        assert!(e.max_relative_residual(&a) < 1e-14);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let tol = Tolerances::default();
        let a = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let e = eig(&a, &tol).unwrap();
        let ev = sorted_by_re_im(e.eigenvalues.clone());
        assert!((ev[0] + I).norm() < 1e-13);
        assert!((ev[1] - I).norm() < 1e-13);
        assert!(e.max_relative_residual(&a) < 1e-13);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let tol = Tolerances::default();
        let a = CMatrix::from_real_rows(&[&[6.0, -11.0, 6.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let e = eig(&a, &tol).unwrap();
        let ev = sorted_by_re_im(e.eigenvalues.clone());
        for (k, z) in ev.iter().enumerate() {
            assert!((z - (k as f64 + 1.0)).norm() < 1e-10, "{z}");
        }
        assert!(e.max_relative_residual(&a) < 1e-12);
    }

    #[test]
    fn defective_block_has_huge_condition() {
        let tol = Tolerances::default();
        let a = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let e = eig(&a, &tol).unwrap();
        assert!(e.condition_estimate > 1e12);
    }

    #[test]
    fn eigh_identity_cluster_is_orthonormal() {
        let tol = Tolerances::default();
        let (vals, vecs) = eigh(&CMatrix::identity(3), &tol).unwrap();
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let gram = &vecs.adjoint() * &vecs;
        assert!(gram.max_abs_diff(&CMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn non_square_rejected() {
        let tol = Tolerances::default();
        assert!(matches!(
            eig(&CMatrix::zeros(2, 3), &tol),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
