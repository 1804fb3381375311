//! Haar-random unitaries and the Harish-Chandra–Itzykson–Zuber integral
//!
//! `∫_{U(N)} exp tr(diag(α) U diag(x) U*) dU = V(n_min) det(e^{α_i x_j}) / (V(α) V(x))`,
//!
//! checked by Monte Carlo against its closed form, together with the
//! Schur–Horn sandwich on the integrand.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::{lu_summary, Matrix};
use crate::rng::{derive_seed, generator, normal_pair};
use crate::symfun::{vandermonde_log, PositiveVector};

/// Closest spacing accepted by the closed form, which is `0/0` at coincidences.
pub const MIN_GAP: f64 = 1e-6;
pub const MIN_SAMPLES: usize = 100;
/// Relative slack on the integrand sandwich, covering rounding in `|U_ij|²`.
const SANDWICH_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return invalid(format!("{} entries for a {n}x{n} matrix", entries.len()));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return invalid("non-finite entry");
        }
        Ok(ComplexMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `max |(U U*)_ij − δ_ij|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = (0..n).map(|k| self[(i, k)] * self[(j, k)].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Determinant by partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm())).unwrap();
            if a[p * n + k].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a[k * n + k];
            det *= piv;
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                for j in k..n {
                    let v = a[k * n + j];
                    a[i * n + j] -= f * v;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.n + j]
    }
}

/// Haar unitary: Gram–Schmidt (two passes per column) on a matrix of
/// standard complex Gaussians. Gram–Schmidt yields the QR factor whose `R`
/// has a positive real diagonal, which is exactly the phase normalization
/// that makes `Q` Haar distributed.
pub fn haar_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return invalid("dimension must be positive");
    }
    let mut rng = generator(seed);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // cols[k][i] is entry (i, k).
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let (a, b) = normal_pair(&mut rng);
                    Complex64::new(s * a, s * b)
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for _ in 0..2 {
            for j in 0..k {
                let proj: Complex64 = (0..n).map(|i| cols[j][i].conj() * cols[k][i]).sum();
                for i in 0..n {
                    let v = cols[j][i];
                    cols[k][i] -= proj * v;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NumericalFailure("rank-deficient Gaussian draw".into()));
        }
        for z in &mut cols[k] {
            *z /= norm;
        }
    }
    let entries = (0..n * n).map(|idx| cols[idx % n][idx / n]).collect();
    ComplexMatrix::new(n, entries)
}

fn check_pair(alpha: &[f64], x: &[f64]) -> Result<()> {
    if alpha.is_empty() || alpha.len() != x.len() {
        return invalid(format!("|alpha| = {} but |x| = {}", alpha.len(), x.len()));
    }
    if alpha.iter().chain(x).any(|v| !v.is_finite()) {
        return invalid("non-finite coordinate");
    }
    Ok(())
}

fn min_gap(t: &[f64]) -> f64 {
    let mut s = t.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// `ln V(n_min) = Σ_{k<N} ln k!`.
fn log_superfactorial(n: usize) -> f64 {
    (1..n).map(|k| (1..=k).map(|i| (i as f64).ln()).sum::<f64>()).sum()
}

/// Closed form `V(n_min) det(e^{α_i x_j}) / (V(α) V(x))`, evaluated in log
/// space: row `i` is scaled by `e^{−max_j α_i x_j}` before elimination.
pub fn hciz_exact(alpha: &[f64], x: &[f64]) -> Result<f64> {
    check_pair(alpha, x)?;
    let n = alpha.len();
    if n == 1 {
        return Ok((alpha[0] * x[0]).exp());
    }
    for (name, t) in [("alpha", alpha), ("x", x)] {
        let g = min_gap(t);
        if g < MIN_GAP {
            return Err(Error::DegenerateInput(format!("{name} has coordinates {g:e} apart")));
        }
    }
    let shifts: Vec<f64> = alpha.iter().map(|&a| x.iter().map(|&xj| a * xj).fold(f64::NEG_INFINITY, f64::max)).collect();
    let e = Matrix::from_fn(n, n, |i, j| (alpha[i] * x[j] - shifts[i]).exp());
    let lu = lu_summary(&e);
    let (sa, la) = vandermonde_log(alpha);
    let (sx, lx) = vandermonde_log(x);
    let sign = lu.sign * sa * sx;
    if sign <= 0 {
        return Err(Error::NumericalFailure("closed form lost its sign to cancellation".into()));
    }
    let log = shifts.iter().sum::<f64>() + lu.log_abs + log_superfactorial(n) - la - lx;
    Ok(log.exp())
}

/// Pooled Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// Smallest and largest integrand values seen.
    pub min_sample: f64,
    pub max_sample: f64,
}

/// Sample mean of `exp tr(diag(α) U diag(x) U*)` over Haar draws, sample `k`
/// using seed `derive_seed(seed, k)`. The exponent is
/// `x̄ Σα + Σ_ij α_i |U_ij|² (x_j − x̄)` with `x̄ = x_1`, so constant `x`
/// gives a constant integrand. Every sample must lie between
/// `exp Σ α_j x_{N+1−j}` and `exp Σ α_j x_j` (sorted), else the run fails.
pub fn hciz_mc(alpha: &[f64], x: &[f64], samples: usize, seed: u64) -> Result<McEstimate> {
    check_pair(alpha, x)?;
    if samples < MIN_SAMPLES {
        return invalid(format!("need at least {MIN_SAMPLES} samples"));
    }
    let n = alpha.len();
    let (mut sa, mut sx) = (alpha.to_vec(), x.to_vec());
    sa.sort_by(f64::total_cmp);
    sx.sort_by(f64::total_cmp);
    let lo: f64 = (0..n).map(|j| sa[j] * sx[n - 1 - j]).sum();
    let hi: f64 = (0..n).map(|j| sa[j] * sx[j]).sum();
    let slack = SANDWICH_SLACK * (1.0 + sa.iter().map(|a| a.abs()).sum::<f64>() * sx.iter().map(|v| v.abs()).fold(0.0, f64::max));
    let base = x[0];
    let alpha_sum: f64 = alpha.iter().sum();

    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let u = haar_unitary(n, derive_seed(seed, k as u64))?;
            let mut t = 0.0;
            for i in 0..n {
                for j in 0..n {
                    t += alpha[i] * u[(i, j)].norm_sqr() * (x[j] - base);
                }
            }
            let t = base * alpha_sum + t;
            if t < lo - slack || t > hi + slack {
                return Err(Error::NumericalFailure(format!("sample {k}: trace {t} outside [{lo}, {hi}]")));
            }
            Ok(t.exp())
        })
        .collect::<Result<_>>()?;

    let count = values.len() as f64;
    // Accumulated as deviations from the first value, so a constant
    // integrand yields its value exactly and a zero variance.
    let pivot = values[0];
    let shift = values.iter().map(|v| v - pivot).sum::<f64>() / count;
    let mean = pivot + shift;
    let var = values.iter().map(|v| (v - pivot - shift).powi(2)).sum::<f64>() / (count - 1.0);
    Ok(McEstimate {
        mean,
        stderr: (var / count).sqrt(),
        samples,
        seed,
        min_sample: values.iter().copied().fold(f64::INFINITY, f64::min),
        max_sample: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GvBounds {
    pub lower: f64,
    pub det: f64,
    pub upper: f64,
}

impl GvBounds {
    /// Sandwich up to a relative slack.
    pub fn holds(&self, rel: f64) -> bool {
        self.lower <= self.det + rel * self.det.abs() && self.det <= self.upper + rel * self.upper.abs()
    }
}

/// `V(α) V(log u)/V(n_min) · u^{ᾱ} ≤ det(u_i^{α_j}) ≤ V(α) V(log u)/V(n_min) · u^{α}`,
/// where `ᾱ` pairs the largest exponent with the smallest coordinate.
pub fn gv_bounds_check(u: &PositiveVector, alpha: &[f64]) -> Result<GvBounds> {
    let c = u.coords();
    let n = c.len();
    if alpha.len() != n {
        return invalid(format!("|u| = {n} but |alpha| = {}", alpha.len()));
    }
    if c.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("u must be strictly increasing");
    }
    if alpha.iter().any(|a| !a.is_finite()) || alpha.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("alpha must be finite and strictly increasing");
    }
    let logs: Vec<f64> = c.iter().map(|v| v.ln()).collect();
    let prefactor = (vandermonde_log(alpha).1 + vandermonde_log(&logs).1 - log_superfactorial(n)).exp();
    let up: f64 = (0..n).map(|j| alpha[j] * logs[j]).sum();
    let down: f64 = (0..n).map(|j| alpha[n - 1 - j] * logs[j]).sum();
    let lu = lu_summary(&Matrix::from_fn(n, n, |i, j| c[i].powf(alpha[j])));
    Ok(GvBounds { lower: prefactor * down.exp(), det: lu.sign as f64 * lu.log_abs.exp(), upper: prefactor * up.exp() })
}
