use rand::Rng;

use super::{Matrix, SymMatrix};
use crate::error::{invalid, Result};
use crate::rng::generator;

const MARGIN: f64 = 1e-6;

/// Gram matrix `W Wᵀ` of a strictly positive N×r factor, rescaled so the
/// largest entry is `ρ(1 − 10⁻⁶)`. Entries lie in `(0, ρ)`.
pub fn sample_psd(n: usize, rho: f64, rank: usize, seed: u64) -> Result<SymMatrix> {
    let w = factor(n, rho, rank, seed, false)?;
    gram(&w, rho)?.with_domain(0.0, rho)
}

/// As [`sample_psd`] with independent random signs on the factor entries;
/// entries lie in `(−ρ, ρ)`.
pub fn sample_psd_signed(n: usize, rho: f64, rank: usize, seed: u64) -> Result<SymMatrix> {
    let w = factor(n, rho, rank, seed, true)?;
    gram(&w, rho)?.with_domain(-rho, rho)
}

fn factor(n: usize, rho: f64, rank: usize, seed: u64, signed: bool) -> Result<Matrix> {
    if n == 0 || rank == 0 || rank > n {
        return invalid(format!("rank {rank} outside [1, {n}]"));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return invalid("rho must be positive and finite");
    }
    let mut rng = generator(seed);
    let mut w = Matrix::zeros(n, rank);
    for i in 0..n {
        for k in 0..rank {
            // (0, 1]: strictly positive.
            let x = 1.0 - rng.random::<f64>();
            w[(i, k)] = if signed && rng.random_bool(0.5) { -x } else { x };
        }
    }
    Ok(w)
}

fn gram(w: &Matrix, rho: f64) -> Result<SymMatrix> {
    let n = w.rows();
    let g = SymMatrix::from_fn(n, |i, j| w.row(i).iter().zip(w.row(j)).map(|(a, b)| a * b).sum())?;
    let s = rho * (1.0 - MARGIN) / g.matrix().max_abs();
    g.map(|x| x * s)
}
