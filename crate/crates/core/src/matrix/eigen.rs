use serde::{Deserialize, Serialize};

use super::{Matrix, SymMatrix};
use crate::error::{invalid, Error, Result};

pub const DEFAULT_PSD_TOL: f64 = 1e-9;
const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
    /// max over pairs of ‖A v − λ v‖∞.
    pub residual: f64,
    pub sweeps: usize,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.eigenvectors.rows()).map(|i| self.eigenvectors[(i, k)]).collect()
    }
}

/// Cyclic Jacobi eigensolver.
pub fn sym_eigen(a: &SymMatrix) -> Result<Spectrum> {
    let n = a.n();
    if n == 0 {
        return invalid("empty matrix");
    }
    if !a.matrix().is_finite() {
        return invalid("non-finite entry");
    }
    let mut m = a.matrix().clone();
    let mut v = Matrix::identity(n);
    let scale = m.data().iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|ij| m[ij] * m[ij]).sum::<f64>().sqrt();
        if off <= OFF_DIAGONAL_TOL * scale || off == 0.0 {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if sweeps == MAX_SWEEPS {
        return Err(Error::NumericalFailure("Jacobi iteration did not converge".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    let mut residual: f64 = 0.0;
    for (k, &lam) in eigenvalues.iter().enumerate() {
        let x: Vec<f64> = (0..n).map(|i| eigenvectors[(i, k)]).collect();
        let ax = a.matrix().mul_vec(&x);
        for i in 0..n {
            residual = residual.max((ax[i] - lam * x[i]).abs());
        }
    }
    Ok(Spectrum { eigenvalues, eigenvectors, residual, sweeps })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// PSD iff λ_min ≥ −tol·max(1, λ_max).
pub fn is_psd(a: &SymMatrix, tol: f64) -> Result<PsdReport> {
    if !(tol >= 0.0) {
        return invalid("tolerance must be non-negative");
    }
    let s = sym_eigen(a)?;
    let (lo, hi) = (s.min(), s.max());
    Ok(PsdReport { is_psd: lo >= -tol * hi.max(1.0), min_eigenvalue: lo, max_eigenvalue: hi })
}
