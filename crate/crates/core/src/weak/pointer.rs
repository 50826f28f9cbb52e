//! Post-selected Gaussian pointer states.
//!
//! A pointer state is a finite sum of weighted, shifted Gaussians
//! `G(Q) = (2 pi D^2)^{-1/4} exp(-Q^2 / 4D^2)`. Shifts may be complex; all
//! overlaps are then Gaussian integrals with closed forms, and a uniform grid
//! is only used for cross-checks and L2 comparisons.

use std::f64::consts::PI;

use serde::Serialize;

use super::measure::{weak_value, WeakSetup};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, CMatrix, C64, ZERO};
use crate::pt::clusters;
use crate::tolerance::Tolerances;

pub const DEFAULT_GRID_POINTS: usize = 4096;
/// Margin, in pointer widths, beyond the extreme shifts of the default grid.
pub const DEFAULT_GRID_MARGIN: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointerTerm {
    pub weight: C64,
    pub shift: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointerGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub points: usize,
    pub amplitudes: Vec<C64>,
}

impl PointerGrid {
    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        let step = self.step();
        (0..self.points).map(move |k| self.q_min + step * k as f64)
    }

    pub fn step(&self) -> f64 {
        if self.points > 1 {
            (self.q_max - self.q_min) / (self.points - 1) as f64
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointerDistribution {
    pub terms: Vec<PointerTerm>,
    pub width: f64,
    pub grid: Option<PointerGrid>,
}

/// `G(q - shift)` for a possibly complex shift.
pub fn gaussian(q: f64, shift: C64, width: f64) -> C64 {
    let norm = (2.0 * PI * width * width).powf(-0.25);
    let d = C64::new(q, 0.0) - shift;
    (-(d * d) / (4.0 * width * width)).exp() * norm
}

/// `int conj(G(Q - x)) G(Q - y) dQ` and `int Q conj(G(Q - x)) G(Q - y) dQ`.
fn gaussian_moments(x: C64, y: C64, width: f64) -> (C64, C64) {
    let d = x.conj() - y;
    let overlap = (-(d * d) / (8.0 * width * width)).exp();
    (overlap, overlap * (x.conj() + y) * 0.5)
}

impl PointerDistribution {
    pub fn amplitude(&self, q: f64) -> C64 {
        self.terms
            .iter()
            .map(|t| t.weight * gaussian(q, t.shift, self.width))
            .sum()
    }

    /// `int conj(self(Q)) other(Q) dQ`, in closed form.
    pub fn inner(&self, other: &PointerDistribution) -> Result<C64> {
        Ok(self.moments(other)?.0)
    }

    fn moments(&self, other: &PointerDistribution) -> Result<(C64, C64)> {
        if self.width != other.width {
            return Err(Error::InvalidInput("pointer widths differ".into()));
        }
        let mut zeroth = ZERO;
        let mut first = ZERO;
        for a in &self.terms {
            for b in &other.terms {
                let (m0, m1) = gaussian_moments(a.shift, b.shift, self.width);
                let w = a.weight.conj() * b.weight;
                zeroth += w * m0;
                first += w * m1;
            }
        }
        Ok((zeroth, first))
    }

    /// `int |psi(Q)|^2 dQ`.
    pub fn norm_sqr(&self) -> f64 {
        self.moments(self).expect("same width").0.re
    }

    /// `int Q |psi(Q)|^2 dQ / int |psi(Q)|^2 dQ`.
    pub fn mean_position(&self) -> Result<f64> {
        let (m0, m1) = self.moments(self)?;
        if m0.re <= 0.0 {
            return Err(Error::VanishingOverlap { overlap: 0.0 });
        }
        Ok(m1.re / m0.re)
    }

    /// `||self - other|| / ||self||`, in closed form.
    pub fn l2_distance(&self, other: &PointerDistribution) -> Result<f64> {
        let mut diff = self.clone();
        diff.grid = None;
        diff.terms.extend(other.terms.iter().map(|t| PointerTerm {
            weight: -t.weight,
            shift: t.shift,
        }));
        let base = self.norm_sqr();
        if base <= 0.0 {
            return Err(Error::VanishingOverlap { overlap: 0.0 });
        }
        Ok((diff.norm_sqr().max(0.0) / base).sqrt())
    }

    /// Attach amplitudes sampled on `points` uniformly spaced positions.
    pub fn sampled(mut self, q_min: f64, q_max: f64, points: usize) -> Result<Self> {
        if points < 2 || !(q_max > q_min) {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 points and q_max > q_min (got {points}, [{q_min}, {q_max}])"
            )));
        }
        let mut grid = PointerGrid {
            q_min,
            q_max,
            points,
            amplitudes: Vec::new(),
        };
        grid.amplitudes = grid.positions().map(|q| self.amplitude(q)).collect();
        self.grid = Some(grid);
        Ok(self)
    }

    /// The default grid: `DEFAULT_GRID_POINTS` points spanning
    /// `DEFAULT_GRID_MARGIN` widths beyond the extreme real shifts of `self`
    /// and `others`.
    pub fn default_range(&self, others: &[&PointerDistribution]) -> (f64, f64) {
        let shifts = self
            .terms
            .iter()
            .chain(others.iter().flat_map(|d| d.terms.iter()))
            .map(|t| t.shift.re);
        let (lo, hi) = shifts.fold((0.0f64, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
        (
            lo - DEFAULT_GRID_MARGIN * self.width,
            hi + DEFAULT_GRID_MARGIN * self.width,
        )
    }

    /// `sqrt(sum |a - b|^2 / sum |a|^2)` over the attached grids.
    pub fn grid_l2_distance(&self, other: &PointerDistribution) -> Result<f64> {
        let (Some(a), Some(b)) = (&self.grid, &other.grid) else {
            return Err(Error::InvalidInput("both distributions need a grid".into()));
        };
        if a.q_min != b.q_min || a.q_max != b.q_max || a.points != b.points {
            return Err(Error::InvalidInput("grids differ".into()));
        }
        let num: f64 = a
            .amplitudes
            .iter()
            .zip(&b.amplitudes)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        let den: f64 = a.amplitudes.iter().map(|x| x.norm_sqr()).sum();
        if den <= 0.0 {
            return Err(Error::VanishingOverlap { overlap: 0.0 });
        }
        Ok((num / den).sqrt())
    }

    /// Riemann-sum mean position over the attached grid.
    pub fn grid_mean_position(&self) -> Result<f64> {
        let Some(grid) = &self.grid else {
            return Err(Error::InvalidInput("no grid attached".into()));
        };
        let (mut m0, mut m1) = (0.0, 0.0);
        for (q, a) in grid.positions().zip(&grid.amplitudes) {
            m0 += a.norm_sqr();
            m1 += q * a.norm_sqr();
        }
        if m0 <= 0.0 {
            return Err(Error::VanishingOverlap { overlap: 0.0 });
        }
        Ok(m1 / m0)
    }
}

/// Spectral projectors of a Hermitian matrix, one per eigenvalue cluster.
fn spectral_projectors(a: &CMatrix, tol: &Tolerances) -> Result<Vec<(f64, CMatrix)>> {
    let (values, vectors) = linalg::eigh(a, tol)?;
    let as_complex: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
    let gap = tol.cluster_gap * a.norm_fro().max(1.0);
    let n = a.rows();
    Ok(clusters(&as_complex, gap)
        .into_iter()
        .map(|members| {
            let mean = members.iter().map(|&k| values[k]).sum::<f64>() / members.len() as f64;
            let mut proj = CMatrix::zeros(n, n);
            for &k in &members {
                let v = vectors.column(k);
                proj = &proj + &CMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj());
            }
            (mean, proj)
        })
        .collect())
}

/// `sum_a <post|Pi_a|pre> G(Q - g a)` over the distinct eigenvalues `a`.
pub fn pointer_exact(setup: &WeakSetup, tol: &Tolerances) -> Result<PointerDistribution> {
    let terms = spectral_projectors(&setup.observable, tol)?
        .into_iter()
        .map(|(a, proj)| PointerTerm {
            weight: dot(&setup.post, &proj.matvec(&setup.pre)),
            shift: C64::new(setup.g * a, 0.0),
        })
        .collect();
    Ok(PointerDistribution {
        terms,
        width: setup.pointer_width,
        grid: None,
    })
}

/// `<post|pre> G(Q - g A_w)`, with the complex shift kept in the argument.
pub fn pointer_weak_approx(setup: &WeakSetup, tol: &Tolerances) -> Result<PointerDistribution> {
    let aw = weak_value(setup, tol)?;
    Ok(PointerDistribution {
        terms: vec![PointerTerm {
            weight: dot(&setup.post, &setup.pre),
            shift: aw * setup.g,
        }],
        width: setup.pointer_width,
        grid: None,
    })
}

/// `sum_f int |psi_f(Q)|^2 dQ` over the columns of an orthonormal basis of
/// post-selections: the pointer probability with no post-selection loss.
///
/// Equals `<pre|pre>` for every `g`.
pub fn unconditioned_probability(setup: &WeakSetup, basis: &CMatrix, tol: &Tolerances) -> Result<f64> {
    let n = setup.pre.len();
    if basis.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("basis must be {n}x{n}")));
    }
    let mut total = 0.0;
    for k in 0..n {
        let mut s = setup.clone();
        s.post = basis.column(k);
        total += pointer_exact(&s, tol)?.norm_sqr();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vec_norm, ONE};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn sigma_x_setup(g: f64) -> WeakSetup {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let v = vec![ONE * 0.5f64.sqrt(), ONE * 0.5f64.sqrt()];
        WeakSetup::new(a, v.clone(), v, g, 1.0, &tol()).unwrap()
    }

    #[test]
    fn gaussian_is_normalized() {
        let d = PointerDistribution {
            terms: vec![PointerTerm { weight: ONE, shift: C64::new(0.3, 0.0) }],
            width: 0.7,
            grid: None,
        };
        assert!((d.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((d.mean_position().unwrap() - 0.3).abs() < 1e-15);
        let d = d.sampled(-8.0, 8.0, 4001).unwrap();
        let g = d.grid.as_ref().unwrap();
        let riemann: f64 = g.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * g.step();
        assert!((riemann - 1.0).abs() < 1e-12);
        assert!((d.grid_mean_position().unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn two_outcome_projectors() {
        let d = pointer_exact(&sigma_x_setup(0.2), &tol()).unwrap();
        assert_eq!(d.terms.len(), 2);
        for t in &d.terms {
            assert!((t.weight - ONE * 0.5).norm() < 1e-15);
            assert!((t.shift.re.abs() - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_coupling_matches_weak_form() {
        let s = sigma_x_setup(0.0);
        let exact = pointer_exact(&s, &tol()).unwrap();
        let weak = pointer_weak_approx(&s, &tol()).unwrap();
        assert_eq!(exact.l2_distance(&weak).unwrap(), 0.0);
        let w: C64 = exact.terms.iter().map(|t| t.weight).sum();
        assert!((w - ONE).norm() < 1e-15);
    }

    #[test]
    fn degenerate_eigenvalues_share_a_term() {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 3.0]]);
        let v = vec![ONE, ONE, ONE];
        let s = WeakSetup::new(a, v.clone(), v, 0.1, 1.0, &tol()).unwrap();
        let d = pointer_exact(&s, &tol()).unwrap();
        assert_eq!(d.terms.len(), 2);
    }

    #[test]
    fn grid_matches_terms() {
        let exact = pointer_exact(&sigma_x_setup(0.3), &tol()).unwrap();
        let (lo, hi) = exact.default_range(&[]);
        let sampled = exact.clone().sampled(lo, hi, DEFAULT_GRID_POINTS).unwrap();
        let g = sampled.grid.as_ref().unwrap();
        for (q, a) in g.positions().zip(&g.amplitudes) {
            assert!((exact.amplitude(q) - a).norm() < 1e-12);
        }
    }

    #[test]
    fn probability_without_post_selection() {
        let a = CMatrix::from_real_rows(&[&[1.0, 0.5, 0.0], &[0.5, -1.0, 0.2], &[0.0, 0.2, 2.0]]);
        let pre = vec![ONE, C64::new(0.0, 0.5), C64::new(-0.3, 0.1)];
        let expected = vec_norm(&pre).powi(2);
        for g in [0.0, 0.1, 1.0, 5.0] {
            let s = WeakSetup::new(a.clone(), pre.clone(), pre.clone(), g, 1.0, &tol()).unwrap();
            let p = unconditioned_probability(&s, &CMatrix::identity(3), &tol()).unwrap();
            assert!((p - expected).abs() < 1e-12, "g = {g}: {p}");
        }
    }
}
