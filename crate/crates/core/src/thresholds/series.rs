use serde::{Deserialize, Serialize};

use super::{check_common, qualitative_k, CoefficientTuple, Formula, KVariant, ThresholdInputs, ThresholdReport};
use crate::error::{invalid, Error, Result};
use crate::symfun::PowerTuple;

/// Truncation stops once the certified tail is below this fraction of the partial sum.
pub const SERIES_TOL: f64 = 1e-12;
const MAX_TERMS: usize = 1_000_000;

/// Tail `g` added with a negative sign to `Σ c_j x^{n_j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesTail {
    /// Finitely many `(M, g_M)`.
    Finite { terms: Vec<(f64, f64)> },
    /// `g_M = amplitude · ratio^M` for every integer `M > n_{N−1}`.
    Geometric { amplitude: f64, ratio: f64 },
    /// Explicit `g_M` for `M = first, first+1, …`, and beyond the list the
    /// certificate `|g_M| ≤ bound · ρ^{−M} (1+ε)^{−M}`.
    Certified { first: u64, coeffs: Vec<f64>, bound: f64, eps: f64 },
    /// Atomic measure `Σ w_k δ_{t_k}`, i.e. `g(x) = Σ w_k x^{t_k}`, with
    /// every atom at least `n_{N−1} + ε`.
    Atomic { atoms: Vec<(f64, f64)>, eps: f64 },
}

fn k_at(n: &PowerTuple, c: &CoefficientTuple, m: f64, rho: f64) -> Result<f64> {
    let v = if n.is_integral() && m.fract() == 0.0 { KVariant::Integer } else { KVariant::RealFull };
    Ok(qualitative_k(n, c, m, rho, v)?.value)
}

/// `Σ_M |g_M| · 𝒦_M`, with 𝒦_M the explicit full-rank threshold for `x^M`.
pub fn series_threshold(n: &PowerTuple, c: &CoefficientTuple, rho: f64, tail: &SeriesTail) -> Result<ThresholdReport> {
    let top = n.last();
    check_common(n, c, top + 1.0, rho)?;
    let first_int = top.floor() as u64 + 1;
    let mut extras = Vec::new();
    let (value, formula) = match tail {
        SeriesTail::Finite { terms } => {
            let mut s = 0.0;
            for &(m, g) in terms {
                if !(m > top) {
                    return invalid(format!("tail exponent {m} must exceed {top}"));
                }
                s += g.abs() * k_at(n, c, m, rho)?;
            }
            extras.push(("terms".into(), terms.len() as f64));
            (s, Formula::Series)
        }
        SeriesTail::Geometric { amplitude, ratio } => {
            let eps = 1.0 / (ratio.abs() * rho) - 1.0;
            if !(eps > 0.0) {
                return Err(Error::NotConvergent(format!("|ratio|·rho = {} is not below 1", ratio.abs() * rho)));
            }
            if *amplitude == 0.0 || *ratio == 0.0 {
                return invalid("geometric tail is identically zero");
            }
            let q = 1.0 / (1.0 + eps);
            let (s, last) = sum_with_tail(n, c, rho, first_int, first_int, q, |m| amplitude.abs() * ratio.abs().powf(m as f64))?;
            extras.push(("eps".into(), eps));
            extras.push(("last_term".into(), last as f64));
            (s, Formula::Series)
        }
        SeriesTail::Certified { first, coeffs, bound, eps } => {
            if !(*eps > 0.0) {
                return Err(Error::NotConvergent(format!("decay certificate eps = {eps} must be positive")));
            }
            if (*first as f64) <= top {
                return invalid(format!("first tail exponent {first} must exceed {top}"));
            }
            let q = 1.0 / (1.0 + eps);
            let end = first + coeffs.len() as u64;
            let (s, last) = if *bound == 0.0 {
                let mut s = 0.0;
                for (i, g) in coeffs.iter().enumerate() {
                    if *g != 0.0 {
                        s += g.abs() * k_at(n, c, (first + i as u64) as f64, rho)?;
                    }
                }
                (s, end.saturating_sub(1))
            } else {
                sum_with_tail(n, c, rho, *first, end, q, |m| {
                    if m < end {
                        coeffs[(m - first) as usize].abs()
                    } else {
                        bound.abs() * (q / rho).powf(m as f64)
                    }
                })?
            };
            extras.push(("eps".into(), *eps));
            extras.push(("last_term".into(), last as f64));
            (s, Formula::Series)
        }
        SeriesTail::Atomic { atoms, eps } => {
            let mut s = 0.0;
            for &(t, w) in atoms {
                if !(t >= top + eps) || !(*eps > 0.0) {
                    return invalid(format!("atom {t} below n_(N-1) + eps = {}", top + eps));
                }
                s += w.abs() * qualitative_k(n, c, t, rho, KVariant::RealFull)?.value;
            }
            extras.push(("atoms".into(), atoms.len() as f64));
            (s, Formula::Laplace)
        }
    };
    let inputs = ThresholdInputs { n: n.exps().to_vec(), c: c.values().to_vec(), m: None, rho: Some(rho), extras };
    ThresholdReport::new(value, formula, inputs)
}

/// Sums `|g_M| 𝒦_M` from `first` on. From `stop_from` on the coefficients
/// are the bounds `B q^M ρ^{−M}`, whose consecutive term ratio is at most
/// `r_M = q·((M+1−n)/(M−n))^{2(N−1)}`, decreasing in `M`; once `r_M < 1`
/// the rest is at most `term·r_M/(1−r_M)`.
fn sum_with_tail(
    n: &PowerTuple,
    c: &CoefficientTuple,
    rho: f64,
    first: u64,
    stop_from: u64,
    q: f64,
    coeff: impl Fn(u64) -> f64,
) -> Result<(f64, u64)> {
    let top = n.last();
    let deg = 2.0 * (n.len() as f64 - 1.0);
    let mut s = 0.0;
    let mut m = first;
    for _ in 0..MAX_TERMS {
        let g = coeff(m);
        let term = if g == 0.0 { 0.0 } else { g * k_at(n, c, m as f64, rho)? };
        s += term;
        let mf = m as f64;
        let r = q * ((mf + 1.0 - top) / (mf - top)).powf(deg);
        if m >= stop_from && r < 1.0 && term > 0.0 && term * r / (1.0 - r) < SERIES_TOL * s {
            return Ok((s, m));
        }
        if !s.is_finite() {
            return Err(Error::NotConvergent("partial sums overflow".into()));
        }
        m += 1;
    }
    Err(Error::NotConvergent(format!("tail bound not reached within {MAX_TERMS} terms")))
}
