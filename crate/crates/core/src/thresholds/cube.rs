use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sharp_c, CoefficientTuple};
use crate::error::{invalid, Error, Result};
use crate::symfun::PowerTuple;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeBounds {
    /// `(Σ_m 𝒦_{α_m})⁻¹`: every η up to this keeps the cube PSD.
    pub eta_lower: f64,
    /// `𝒦_{α_{M+1}}⁻¹`: no larger η can work for every matrix.
    pub eta_upper: f64,
}

/// `𝒦_α` is the sharp rank-one constant with top exponent `n_{N−1} + α`,
/// i.e. `Σ_j V(n_j(α))²/V(n)² · ρ^{n_{N−1}+α−n_j}/c_j`.
fn k_alpha(n: &PowerTuple, c: &CoefficientTuple, rho: f64, alpha: f64) -> Result<f64> {
    Ok(sharp_c(n, c, n.last() + alpha, rho)?.value)
}

fn check_alpha(alpha: &[f64]) -> Result<()> {
    if alpha.is_empty() || alpha[0] <= 0.0 || alpha.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("alpha must be non-empty, positive and strictly increasing");
    }
    Ok(())
}

/// Bounds on the largest half-width η of the matrix cube
/// `{Σ c_j A^{∘n_j} + Σ_m u_m A^{∘(n_{N−1}+α_m)} : |u_m| ≤ η}` inside the PSD cone.
pub fn cube_bounds(n: &PowerTuple, c: &CoefficientTuple, rho: f64, alpha: &[f64]) -> Result<CubeBounds> {
    check_alpha(alpha)?;
    let ks = alpha.iter().map(|&a| k_alpha(n, c, rho, a)).collect::<Result<Vec<_>>>()?;
    Ok(CubeBounds { eta_lower: 1.0 / ks.iter().sum::<f64>(), eta_upper: 1.0 / ks.last().unwrap() })
}

/// Exponent tuples indexed by dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleFamily {
    /// `n_j = start + step·j`.
    Arithmetic { start: f64, step: f64 },
}

impl TupleFamily {
    pub fn tuple(&self, dim: usize) -> Result<PowerTuple> {
        match *self {
            TupleFamily::Arithmetic { start, step } => PowerTuple::new((0..dim).map(|j| start + step * j as f64).collect()),
        }
    }

    fn max_step(&self) -> f64 {
        match *self {
            TupleFamily::Arithmetic { step, .. } => step,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeScanPoint {
    pub dim: usize,
    /// `𝒦_{α_{M+1}}⁻¹ · Σ_m 𝒦_{α_m}`, the ratio of the upper to the lower η bound.
    pub ratio: f64,
    /// `M · 2α²_{M+1} max(1, ρ^{α_1−α_{M+1}}) / (N−2)²` when `N ≥ 3` and the gaps are at least 1.
    pub envelope: Option<f64>,
}

/// Ratio of the two η bounds across dimensions, with constant coefficients `c`.
pub fn cube_asymptotic_scan(
    family: TupleFamily,
    c: f64,
    alpha: &[f64],
    rho: f64,
    dims: std::ops::RangeInclusive<usize>,
) -> Result<Vec<CubeScanPoint>> {
    check_alpha(alpha)?;
    let m = alpha.len() - 1;
    if m > 0 && alpha[m] - alpha[m - 1] < family.max_step() {
        return Err(Error::PreconditionViolated(format!(
            "top alpha gap {} is below the exponent gap {}",
            alpha[m] - alpha[m - 1],
            family.max_step()
        )));
    }
    let dims: Vec<usize> = dims.collect();
    dims.par_iter()
        .map(|&dim| {
            let n = family.tuple(dim)?;
            let cs = CoefficientTuple::new(vec![c; dim])?;
            let ks = alpha.iter().map(|&a| k_alpha(&n, &cs, rho, a)).collect::<Result<Vec<_>>>()?;
            let ratio = ks.iter().sum::<f64>() / ks[m];
            let envelope = (dim >= 3 && family.max_step() >= 1.0).then(|| {
                let top = alpha[m];
                m as f64 * 2.0 * top * top * rho.powf(alpha[0] - top).max(1.0) / ((dim - 2) as f64).powi(2)
            });
            Ok(CubeScanPoint { dim, ratio, envelope })
        })
        .collect()
}
