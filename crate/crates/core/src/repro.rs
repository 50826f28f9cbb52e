//! Z-parameter surfaces of the two-level broken model and the closed-form
//! unbroken check.
//!
//! For `Xi = Psi` and the unscaled closed-form frame,
//! `Z11 = |<phi~_1| e^{-itH~} |psi~_1>|` and likewise `Z22` (the eta side
//! vanishes on the diagonal), while `Z12`, `Z21` are relative differences
//! `|<phi~_i| e^{-itH~} |psi~_j> - <psi_i| eta e^{-itH} |psi_j>| / |<psi_i| eta e^{-itH} |psi_j>|`.

use std::io::Write;

use serde::Serialize;

use crate::dilation::{build_dilation, DilationOptions, DilationResult, FrameScaling, GuntherSamsonov};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pt::BenderModel;
use crate::tolerance::Tolerances;
use crate::weak::small_time_matrices;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub r: f64,
    pub theta: f64,
    pub t_axis: Vec<f64>,
    pub s_axis: Vec<f64>,
    /// Indexed `[t][s]`.
    pub z11: Vec<Vec<f64>>,
    pub z22: Vec<Vec<f64>>,
    pub z12: Vec<Vec<f64>>,
    pub z21: Vec<Vec<f64>>,
    pub max_z11: f64,
    pub max_z22: f64,
    pub max_z12: f64,
    pub max_z21: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZMaxima {
    pub max_z11: f64,
    pub max_z22: f64,
    pub max_z12: f64,
    pub max_z21: f64,
}

impl GridReport {
    pub fn maxima(&self) -> ZMaxima {
        ZMaxima {
            max_z11: self.max_z11,
            max_z22: self.max_z22,
            max_z12: self.max_z12,
            max_z21: self.max_z21,
        }
    }

    /// Header `t,s,z11,z22,z12,z21`, then one row per grid point, t-major.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidInput(format!("CSV output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "s", "z11", "z22", "z12", "z21"]).map_err(io)?;
        for (a, t) in self.t_axis.iter().enumerate() {
            for (b, s) in self.s_axis.iter().enumerate() {
                let row = [
                    *t,
                    *s,
                    self.z11[a][b],
                    self.z22[a][b],
                    self.z12[a][b],
                    self.z21[a][b],
                ];
                w.write_record(row.iter().map(|x| x.to_string())).map_err(io)?;
            }
        }
        w.flush()
            .map_err(|e| Error::InvalidInput(format!("CSV output failed: {e}")))?;
        Ok(())
    }
}

/// `steps` equally spaced points on `[0, max]`, both ends included.
pub fn axis(max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| if k + 1 == steps { max } else { max * k as f64 / (steps - 1) as f64 })
        .collect()
}

/// Dilation of the two-level model with the unscaled closed-form frame and `Xi = Psi`.
pub fn bender_dilation(r: f64, theta: f64, s: f64, tol: &Tolerances) -> Result<DilationResult> {
    let m = BenderModel::new(r, theta, s);
    let delta = m.delta();
    if !(delta < 0.0) || delta.abs() <= tol.residual {
        return Err(Error::RegimeViolation(format!(
            "s = {s}: delta = {delta:.3e} is not in the broken regime"
        )));
    }
    if m.frame_determinant().abs() <= tol.rcond_floor {
        return Err(Error::RegimeViolation(format!(
            "s = {s}: -4 delta u^2 - 1 vanishes"
        )));
    }
    let canon = m.canonical(tol)?;
    let options = DilationOptions {
        xi: None,
        scaling: FrameScaling::Fixed(1.0),
    };
    build_dilation(&m.hamiltonian(), &canon, &options, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZSample {
    pub t: f64,
    pub z11: f64,
    pub z22: f64,
    pub z12: f64,
    pub z21: f64,
}

fn z_values(d: &DilationResult, t: f64, tol: &Tolerances) -> Result<ZSample> {
    let (tilde, eta_side) = small_time_matrices(d, t, tol)?;
    let rel = |i: usize, j: usize| (tilde[(i, j)] - eta_side[(i, j)]).norm() / eta_side[(i, j)].norm();
    Ok(ZSample {
        t,
        z11: tilde[(0, 0)].norm(),
        z22: tilde[(1, 1)].norm(),
        z12: rel(0, 1),
        z21: rel(1, 0),
    })
}

/// Z parameters on the `steps x steps` grid `[0, t_max] x [0, s_max]`.
pub fn z_grid(r: f64, theta: f64, t_max: f64, s_max: f64, steps: usize, tol: &Tolerances) -> Result<GridReport> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!("steps = {steps}; need at least 2")));
    }
    if !(t_max >= 0.0 && s_max >= 0.0) {
        return Err(Error::InvalidInput("t_max and s_max must be nonnegative".into()));
    }
    let t_axis = axis(t_max, steps);
    let s_axis = axis(s_max, steps);
    let dilations = s_axis
        .iter()
        .map(|&s| bender_dilation(r, theta, s, tol))
        .collect::<Result<Vec<_>>>()?;
    let empty = vec![vec![0.0; steps]; steps];
    let (mut z11, mut z22, mut z12, mut z21) = (empty.clone(), empty.clone(), empty.clone(), empty);
    for (a, &t) in t_axis.iter().enumerate() {
        for (b, d) in dilations.iter().enumerate() {
            let z = z_values(d, t, tol)?;
            for (grid, v) in [(&mut z11, z.z11), (&mut z22, z.z22), (&mut z12, z.z12), (&mut z21, z.z21)] {
                if !v.is_finite() {
                    return Err(Error::RegimeViolation(format!(
                        "non-finite Z at t = {t}, s = {}",
                        s_axis[b]
                    )));
                }
                grid[a][b] = v;
            }
        }
    }
    let max = |g: &Vec<Vec<f64>>| g.iter().flatten().copied().fold(0.0, f64::max);
    Ok(GridReport {
        r,
        theta,
        max_z11: max(&z11),
        max_z22: max(&z22),
        max_z12: max(&z12),
        max_z21: max(&z21),
        t_axis,
        s_axis,
        z11,
        z22,
        z12,
        z21,
    })
}

/// Z parameters at fixed `s` along the given times.
pub fn z_convergence(r: f64, theta: f64, s: f64, t_points: &[f64], tol: &Tolerances) -> Result<Vec<ZSample>> {
    let d = bender_dilation(r, theta, s, tol)?;
    t_points.iter().map(|&t| z_values(&d, t, tol)).collect()
}

/// Whether `f` strictly decreases as `t` decreases (samples taken in any order).
pub fn strictly_decreasing_as_t_shrinks(samples: &[ZSample], f: impl Fn(&ZSample) -> f64) -> bool {
    let mut sorted: Vec<&ZSample> = samples.iter().collect();
    sorted.sort_by(|a, b| b.t.total_cmp(&a.t));
    sorted.windows(2).all(|w| f(w[1]) < f(w[0]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnbrokenReport {
    pub e0: f64,
    pub s: f64,
    pub theta: f64,
    /// `||Phi~^dag Psi~ - I||` with `Phi~ = Psi~`.
    pub overlap: f64,
    /// `||Phi~^dag H~ Psi~ - J||`
    pub hamiltonian: f64,
    /// `||H~ - H~^dag||`
    pub hermiticity: f64,
    /// `||H Psi - Psi J||`
    pub subspace: f64,
    /// `(t, ||e^{-itH~} Psi~ - Psi~ e^{-itJ}||)`; infinite where the exponential failed.
    pub evolution: Vec<(f64, f64)>,
}

impl UnbrokenReport {
    pub fn max_residual(&self) -> f64 {
        self.evolution.iter().map(|&(_, r)| r).fold(
            self.overlap.max(self.hamiltonian).max(self.hermiticity).max(self.subspace),
            |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) },
        )
    }

    pub fn passes(&self, bound: f64) -> bool {
        self.max_residual() <= bound
    }
}

/// Residuals of the closed-form unbroken construction.
pub fn verify_unbroken_example(e0: f64, s: f64, theta: f64, t_samples: &[f64], tol: &Tolerances) -> UnbrokenReport {
    let gs = GuntherSamsonov::new(e0, s, theta);
    let ht = gs.h_tilde();
    let pt = gs.psi_tilde();
    let j = gs.j();
    let psi = pt.submatrix(0, 0, 2, 2);
    let evolution = t_samples
        .iter()
        .map(|&t| {
            let r = (|| -> Result<f64> {
                let lhs = &linalg::evolution(&ht, t, tol)? * &pt;
                let rhs = &pt * &linalg::evolution(&j, t, tol)?;
                Ok((&lhs - &rhs).norm_fro())
            })();
            (t, r.unwrap_or(f64::INFINITY))
        })
        .collect();
    UnbrokenReport {
        e0,
        s,
        theta,
        overlap: (&(&pt.adjoint() * &pt) - &CMatrix::identity(2)).norm_fro(),
        hamiltonian: (&(&(&pt.adjoint() * &ht) * &pt) - &j).norm_fro(),
        hermiticity: (&ht - &ht.adjoint()).norm_fro(),
        subspace: (&(&gs.hamiltonian() * &psi) - &(&psi * &j)).norm_fro(),
        evolution,
    }
}
