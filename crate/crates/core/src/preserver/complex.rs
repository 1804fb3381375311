use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{self, Q};
use crate::rng::generator;
use crate::symfun::{schur_last_variable, PowerTuple, DEFAULT_TABLEAU_CAP};

const MAX_ITERATIONS: usize = 10_000;
const RESTARTS: u64 = 4;
const STEP_TOL: f64 = 1e-12;
/// `|det| / ∏‖column‖` above this counts as full rank.
const SPAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ComplexOutcome {
    /// `u^{∘M}` leaves the span of `u^{∘n_0}, …, u^{∘n_{N−1}}` although the
    /// latter are dependent, so the rank-one matrix `u u*` defeats every
    /// `Σ c_j z^{n_j} + c_M z^M` with `c_M < 0`.
    Found {
        z0: Complex64,
        m: u64,
        u: Vec<Complex64>,
        /// Normalized determinant certifying that `u^{∘M}` is outside the span.
        span_ratio: f64,
        /// Normalized `|det(u^{∘n})|`, which vanishes in exact arithmetic.
        dependence_residual: f64,
    },
    /// The exponents are consecutive; such sums do have negative thresholds.
    NoneExists,
}

/// A root `z₀ ∉ [0, ∞)` of `z ↦ s_n(1, 2, …, N−1, z)` gives a small complex
/// `u ∝ (1, …, N−1, z₀)` with dependent powers `u^{∘n_j}`; among the next `N`
/// exponents one escapes their span.
pub fn complex_counterexample(n: &PowerTuple, rho: f64) -> Result<ComplexOutcome> {
    let ints = n.ints().ok_or_else(|| Error::InvalidInput("complex counterexamples need integral exponents".into()))?;
    let len = ints.len();
    if len < 2 {
        return invalid("need N >= 2");
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return invalid("rho must be positive and finite");
    }
    if ints.windows(2).all(|w| w[1] == w[0] + 1) {
        return Ok(ComplexOutcome::NoneExists);
    }
    let prefix: Vec<Q> = (1..len as i64).map(rational::from_i64).collect();
    let coeffs = schur_last_variable(n, &prefix, DEFAULT_TABLEAU_CAP)?;
    let low = coeffs.iter().position(|c| !c.is_zero()).expect("Schur polynomial is nonzero");
    let poly: Vec<f64> = coeffs[low..].iter().map(rational::to_f64).collect();
    let roots = polynomial_roots(&poly)?;
    let z0 = roots
        .into_iter()
        .filter(|z| z.im.abs() > 1e-9 * z.norm() || z.re < 0.0)
        .map(|z| if z.im.abs() <= 1e-12 * z.norm() { Complex64::new(z.re, 0.0) } else { z })
        .min_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())))
        .ok_or_else(|| Error::NumericalFailure("no root off the positive axis".into()))?;

    let scale = 0.5 * rho.sqrt() / ((len - 1) as f64).max(z0.norm());
    let mut u: Vec<Complex64> = (1..len).map(|k| Complex64::new(scale * k as f64, 0.0)).collect();
    u.push(z0 * scale);
    let dependence_residual = normalized_det(&u, &ints);
    let top = ints[len - 1];
    for m in top + 1..=top + len as u64 {
        let best = (0..len)
            .map(|j| {
                let mut e = ints.clone();
                e[j] = m;
                normalized_det(&u, &e)
            })
            .fold(0.0, f64::max);
        if best > SPAN_TOL {
            return Ok(ComplexOutcome::Found { z0, m, u, span_ratio: best, dependence_residual });
        }
    }
    Err(Error::NumericalFailure("no exponent escapes the span within N steps".into()))
}

/// `|det(u_i^{e_k})| / ∏_k ‖(u_i^{e_k})_i‖`.
fn normalized_det(u: &[Complex64], e: &[u64]) -> f64 {
    let n = u.len();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| e.iter().map(|&k| u[i].powu(k as u32)).collect()).collect();
    let norms: f64 = (0..n).map(|k| (0..n).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt()).product();
    if norms == 0.0 {
        return 0.0;
    }
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        if a[p][col].is_zero() {
            return 0.0;
        }
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col];
        det *= pivot;
        for i in col + 1..n {
            let factor = a[i][col] / pivot;
            for k in col..n {
                let v = a[col][k];
                a[i][k] -= factor * v;
            }
        }
    }
    det.norm() / norms
}

/// Durand–Kerner simultaneous iteration on `Σ p_k z^k`, restarted from
/// perturbed starting points when it stalls.
pub(crate) fn polynomial_roots(p: &[f64]) -> Result<Vec<Complex64>> {
    let degree = p.iter().rposition(|&c| c != 0.0).ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if degree == 0 {
        return Ok(vec![]);
    }
    let monic: Vec<f64> = p[..=degree].iter().map(|c| c / p[degree]).collect();
    let radius = 1.0 + monic[..degree].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c);
    let mut rng = generator(degree as u64);
    for attempt in 0..RESTARTS {
        let base = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..degree)
            .map(|k| {
                let jitter = if attempt == 0 { 1.0 } else { 1.0 + 0.1 * rng.random::<f64>() };
                base.powu(k as u32) * radius * jitter
            })
            .collect();
        for _ in 0..MAX_ITERATIONS {
            let mut converged = true;
            for i in 0..degree {
                let denom = (0..degree).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
                let step = eval(z[i]) / denom;
                if !step.is_finite() {
                    converged = false;
                    break;
                }
                z[i] -= step;
                converged &= step.norm() <= STEP_TOL * z[i].norm().max(f64::MIN_POSITIVE);
            }
            if converged {
                return Ok(z);
            }
        }
    }
    Err(Error::NumericalFailure(format!("root finder did not converge after {MAX_ITERATIONS} iterations")))
}
