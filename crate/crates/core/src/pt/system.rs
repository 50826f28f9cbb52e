use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tolerance::Tolerances;

/// A Hamiltonian with its parity and time-reversal operators.
///
/// `t_conj` is the linear part of the anti-linear time reversal: `T` acts as
/// `v -> t_conj * conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PTSystem {
    pub h: CMatrix,
    pub p: CMatrix,
    pub t_conj: CMatrix,
}

/// One defining relation and how far the operators are from satisfying it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Relation {
    pub name: &'static str,
    /// Largest entrywise modulus of `lhs - rhs`.
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub relations: Vec<Relation>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }
}

pub const PARITY_INVOLUTION: &str = "P^2 = I";
pub const TIME_INVOLUTION: &str = "T conj(T) = I";
pub const PT_COMMUTE: &str = "P T = T conj(P)";
pub const PT_SYMMETRY: &str = "H P T = P T conj(H)";

impl PTSystem {
    pub fn new(h: CMatrix, p: CMatrix, t_conj: CMatrix) -> Result<Self> {
        let n = h.rows();
        for (name, m) in [("H", &h), ("P", &p), ("T", &t_conj)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(PTSystem { h, p, t_conj })
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// Apply the anti-linear operator `PT` to a vector.
    pub fn apply_pt(&self, v: &[crate::C64]) -> Vec<crate::C64> {
        let conj: Vec<_> = v.iter().map(|z| z.conj()).collect();
        (&self.p * &self.t_conj).matvec(&conj)
    }
}

/// Check the four defining relations of a PT-symmetric system.
///
/// A relation passes when its residual is at most
/// `tol.residual * max(1, ||lhs||_max, ||rhs||_max)`.
pub fn validate_pt(sys: &PTSystem, tol: &Tolerances) -> Result<ValidationReport> {
    let PTSystem { h, p, t_conj } = sys;
    let n = h.rows();
    if !h.is_square() || p.shape() != (n, n) || t_conj.shape() != (n, n) {
        return Err(Error::DimensionMismatch(
            "H, P and T must be square with equal dimension".into(),
        ));
    }
    let ident = CMatrix::identity(n);
    let pt = p * t_conj;
    let checks = [
        (PARITY_INVOLUTION, p * p, ident.clone()),
        (TIME_INVOLUTION, t_conj * &t_conj.conj(), ident),
        (PT_COMMUTE, pt.clone(), t_conj * &p.conj()),
        (PT_SYMMETRY, h * &pt, &pt * &h.conj()),
    ];
    let relations: Vec<Relation> = checks
        .into_iter()
        .map(|(name, lhs, rhs)| {
            let residual = lhs.max_abs_diff(&rhs);
            let scale = lhs.norm_max().max(rhs.norm_max()).max(1.0);
            Relation {
                name,
                residual,
                pass: residual <= tol.residual * scale,
            }
        })
        .collect();
    let pass = relations.iter().all(|r| r.pass);
    Ok(ValidationReport { relations, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt::BenderModel;

    #[test]
    fn identity_system_passes_exactly() {
        let i = CMatrix::identity(3);
        let sys = PTSystem::new(i.clone(), i.clone(), i).unwrap();
        let report = validate_pt(&sys, &Tolerances::default()).unwrap();
        assert!(report.pass);
        assert!(report.relations.iter().all(|r| r.residual == 0.0));
    }

    #[test]
    fn two_level_model_is_pt_symmetric() {
        let model = BenderModel::new(2f64.sqrt(), std::f64::consts::FRAC_PI_4, 0.1);
        let report = validate_pt(&model.system(), &Tolerances::default()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn wrong_parity_breaks_symmetry_by_two_r_sin_theta() {
        let (r, theta) = (2f64.sqrt(), std::f64::consts::FRAC_PI_4);
        let model = BenderModel::new(r, theta, 0.1);
        let mut sys = model.system();
        sys.p = CMatrix::identity(2);
        let report = validate_pt(&sys, &Tolerances::default()).unwrap();
        assert!(!report.pass);
        let rel = report.relation(PT_SYMMETRY).unwrap();
        assert!(!rel.pass);
        assert!((rel.residual - 2.0 * r * theta.sin().abs()).abs() < 1e-14);
        assert!(report.relation(PARITY_INVOLUTION).unwrap().pass);
    }

    #[test]
    fn mismatched_dimensions() {
        let err = PTSystem::new(CMatrix::identity(2), CMatrix::identity(3), CMatrix::identity(2));
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }
}
