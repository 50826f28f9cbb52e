//! Seeded generators of random PT-symmetric systems with known canonical data.
//!
//! A system is assembled backwards from its canonical form: pick `J` with
//! conjugate-paired blocks and a random frame `Psi'`, set `H = Psi' J Psi'^-1`,
//! and take `P = I` with time reversal `T = Psi' K conj(Psi')^-1`, where `K`
//! swaps every block with its conjugate partner. Then `H T = T conj(H)` and
//! `T conj(T) = I` hold by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{self, CMatrix, C64, ONE, ZERO};
use crate::pt::{CanonicalData, JordanBlock, PTSystem};
use crate::tolerance::Tolerances;

/// Frames and `Xi` are redrawn until their condition number is below this.
pub const MAX_RANDOM_CONDITION: f64 = 1e3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn complex_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

pub fn complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// A random matrix with condition number below [`MAX_RANDOM_CONDITION`].
pub fn invertible_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let m = complex_matrix(rng, n, n);
        if linalg::condition_number(&m) < MAX_RANDOM_CONDITION {
            return m;
        }
    }
}

/// Jordan structure with `n / 2` conjugate pairs and, for odd `n`, one real
/// eigenvalue. With `jordan_size = 2` the pairs are `2 x 2` Jordan blocks
/// (then `n` must be a multiple of 4 plus at most one real block).
pub fn paired_blocks<R: Rng>(rng: &mut R, n: usize, jordan_size: usize) -> Vec<JordanBlock> {
    let size = jordan_size.max(1);
    let mut blocks = Vec::new();
    let mut used = 0;
    while used + 2 * size <= n {
        let lambda = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..1.5));
        let at = blocks.len();
        blocks.extend(JordanBlock::pair(lambda, size, at));
        used += 2 * size;
    }
    while used < n {
        blocks.push(JordanBlock::real(rng.gen_range(-2.0..2.0), 1));
        used += 1;
    }
    blocks
}

/// The permutation matrix exchanging each block with its conjugate partner.
pub fn partner_swap(blocks: &[JordanBlock]) -> CMatrix {
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let start = *acc;
            *acc += b.size;
            Some(start)
        })
        .collect();
    let n: usize = blocks.iter().map(|b| b.size).sum();
    let mut target = vec![0; n];
    for (k, b) in blocks.iter().enumerate() {
        let partner = b.paired_with.unwrap_or(k);
        for m in 0..b.size {
            target[offsets[k] + m] = offsets[partner] + m;
        }
    }
    CMatrix::from_fn(n, n, |i, j| if target[j] == i { ONE } else { ZERO })
}

/// A random PT-symmetric `n x n` system together with its canonical data.
pub fn random_system<R: Rng>(
    rng: &mut R,
    n: usize,
    jordan_size: usize,
    tol: &Tolerances,
) -> Result<(PTSystem, CanonicalData)> {
    let blocks = paired_blocks(rng, n, jordan_size);
    let psi_prime = invertible_matrix(rng, n);
    let j = crate::pt::jordan_matrix(&blocks);
    let h = linalg::solve(&psi_prime.adjoint(), &(&psi_prime * &j).adjoint(), tol)?.adjoint();
    let k = partner_swap(&blocks);
    let t_conj =
        linalg::solve(&psi_prime.conj().adjoint(), &(&psi_prime * &k).adjoint(), tol)?.adjoint();
    let sys = PTSystem::new(h.clone(), CMatrix::identity(n), t_conj)?;
    let canon = CanonicalData::from_parts(&h, psi_prime, blocks, None, tol)?;
    Ok((sys, canon))
}
