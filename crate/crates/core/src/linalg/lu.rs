use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    pivots: Vec<usize>,
    norm_1: f64,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut pivots: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| lu[(x, k)].norm().total_cmp(&lu[(y, k)].norm()))
                .unwrap_or(k);
            if p != k {
                pivots.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            if pivot == ZERO {
                continue;
            }
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= m * u;
                }
            }
        }
        Ok(Lu {
            lu,
            pivots,
            norm_1: a.norm_1(),
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    fn has_zero_pivot(&self) -> bool {
        (0..self.dim()).any(|k| self.lu[(k, k)] == ZERO)
    }

    /// Solve without any conditioning check. Callers must rule out zero pivots.
    fn solve_unchecked(&self, b: &CMatrix) -> CMatrix {
        let n = self.dim();
        let mut x = CMatrix::from_fn(n, b.cols(), |i, j| b[(self.pivots[i], j)]);
        for col in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, col)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, col)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = s / self.lu[(i, i)];
            }
        }
        x
    }

    /// Reciprocal 1-norm condition number, `1 / (||A||_1 ||A^-1||_1)`.
    ///
    /// Computed from the explicit inverse; matrices here are at most a few
    /// dozen rows, so this costs no more than the factorization itself.
    pub fn rcond(&self) -> f64 {
        if self.has_zero_pivot() || self.norm_1 == 0.0 {
            return 0.0;
        }
        let inv = self.solve_unchecked(&CMatrix::identity(self.dim()));
        let inv_norm = inv.norm_1();
        if !inv_norm.is_finite() {
            return 0.0;
        }
        1.0 / (self.norm_1 * inv_norm)
    }

    pub fn solve(&self, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
        if b.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, system has {}",
                b.rows(),
                self.dim()
            )));
        }
        let rcond = self.rcond();
        if rcond < tol.rcond_floor {
            return Err(Error::SingularMatrix { rcond });
        }
        Ok(self.solve_unchecked(b))
    }

    pub fn determinant(&self) -> C64 {
        let n = self.dim();
        let mut det: C64 = (0..n).map(|k| self.lu[(k, k)]).product();
        // parity of the pivot permutation
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.pivots[k];
                len += 1;
            }
            if len % 2 == 0 {
                det = -det;
            }
        }
        det
    }
}

/// Solve `A X = B`.
pub fn solve(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    Lu::factor(a)?.solve(b, tol)
}

/// Explicit inverse, for the few places that need the matrix itself.
pub fn inverse(a: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    solve(a, &CMatrix::identity(a.rows()), tol)
}

/// Reciprocal condition estimate; zero for singular or non-square input.
pub fn rcond(a: &CMatrix) -> f64 {
    Lu::factor(a).map(|lu| lu.rcond()).unwrap_or(0.0)
}

pub fn determinant(a: &CMatrix) -> Result<C64> {
    Ok(Lu::factor(a)?.determinant())
}
