use serde::Serialize;

use crate::error::Result;
use crate::linalg::{self, CMatrix, C64};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// Diagonalizable with an entirely real spectrum.
    Unbroken,
    /// Some eigenvalue is complex or `H` is defective.
    Broken,
}

/// Everything [`classify`] looked at to reach its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub symmetry: Symmetry,
    #[serde(skip)]
    pub eigenvalues: Vec<C64>,
    /// Condition number of the computed eigenvector matrix.
    pub condition: f64,
    pub max_imag: f64,
    /// Tolerance applied to `max_imag`.
    pub imag_tolerance: f64,
    pub diagonalizable: bool,
}

/// Group indices whose eigenvalues lie within `gap` of each other (single linkage).
pub fn clusters(values: &[C64], gap: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= gap {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut label, i);
        if seen[r] == usize::MAX {
            seen[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[seen[r]].push(i);
    }
    groups
}

pub fn classify_detailed(h: &CMatrix, tol: &Tolerances) -> Result<Classification> {
    let eig = linalg::eig(h, tol)?;
    let n = h.rows();
    let scale = h.norm_fro().max(1.0);
    let gap = tol.cluster_gap * scale;

    // geometric multiplicity of every eigenvalue cluster
    let groups = clusters(&eig.eigenvalues, gap);
    let mut full_multiplicity = true;
    let mut has_multiple = false;
    for g in groups.iter().filter(|g| g.len() > 1) {
        has_multiple = true;
        let mean: C64 = g.iter().map(|&k| eig.eigenvalues[k]).sum::<C64>() / g.len() as f64;
        let mut shifted = h.clone();
        for i in 0..n {
            shifted[(i, i)] -= mean;
        }
        let nullity = n - linalg::numerical_rank(&shifted, gap);
        if nullity < g.len() {
            full_multiplicity = false;
        }
    }
    // The computed eigenvectors of an exactly degenerate cluster can be
    // arbitrarily ill-conditioned, so their condition number only decides
    // when every cluster is a singleton.
    let well_conditioned = eig.condition_estimate <= tol.max_condition;
    let diagonalizable = full_multiplicity && (well_conditioned || has_multiple);

    let max_imag = eig
        .eigenvalues
        .iter()
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    let cond = if eig.condition_estimate.is_finite() {
        eig.condition_estimate
    } else {
        f64::MAX
    };
    let imag_tolerance = tol.residual.max(16.0 * f64::EPSILON * cond) * scale;
    let symmetry = if diagonalizable && max_imag <= imag_tolerance {
        Symmetry::Unbroken
    } else {
        Symmetry::Broken
    };
    Ok(Classification {
        symmetry,
        eigenvalues: eig.eigenvalues,
        condition: eig.condition_estimate,
        max_imag,
        imag_tolerance,
        diagonalizable,
    })
}

/// Unbroken iff `H` is diagonalizable with a real spectrum.
pub fn classify(h: &CMatrix, tol: &Tolerances) -> Result<Symmetry> {
    Ok(classify_detailed(h, tol)?.symmetry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{I, ONE, ZERO};
    use crate::pt::BenderModel;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn broken_two_level_model() {
        let h = BenderModel::new(2f64.sqrt(), FRAC_PI_4, 0.1).hamiltonian();
        assert_eq!(classify(&h, &Tolerances::default()).unwrap(), Symmetry::Broken);
    }

    #[test]
    fn unbroken_two_level_model() {
        let m = BenderModel::new(2f64.sqrt(), FRAC_PI_4, 1.5);
        assert!(m.delta() > 0.0);
        assert_eq!(
            classify(&m.hamiltonian(), &Tolerances::default()).unwrap(),
            Symmetry::Unbroken
        );
    }

    #[test]
    fn hermitian_is_unbroken() {
        let h = CMatrix::from_rows(&[
            vec![ONE, I, ZERO],
            vec![-I, ONE * 2.0, ONE * 0.5],
            vec![ZERO, ONE * 0.5, ONE * -1.0],
        ])
        .unwrap();
        assert_eq!(classify(&h, &Tolerances::default()).unwrap(), Symmetry::Unbroken);
        assert_eq!(
            classify(&CMatrix::identity(4), &Tolerances::default()).unwrap(),
            Symmetry::Unbroken
        );
    }

    #[test]
    fn defective_real_block_is_broken() {
        let h = CMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]);
        let c = classify_detailed(&h, &Tolerances::default()).unwrap();
        assert!(!c.diagonalizable);
        assert_eq!(c.symmetry, Symmetry::Broken);
    }

    #[test]
    fn exceptional_point_is_broken() {
        // delta = 0: s = r sin(theta)
        let m = BenderModel::new(2f64.sqrt(), FRAC_PI_4, 1.0);
        assert_eq!(
            classify(&m.hamiltonian(), &Tolerances::default()).unwrap(),
            Symmetry::Broken
        );
    }

    #[test]
    fn cluster_grouping() {
        let v = [ONE, ONE * (1.0 + 1e-9), ONE * 3.0];
        let g = clusters(&v, 1e-6);
        assert_eq!(g, vec![vec![0, 1], vec![2]]);
    }
}
