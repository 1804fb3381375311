use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Domain, PowerSum};
use crate::error::{invalid, Error, Result};
use crate::matrix::subsets;
use crate::symfun::{vandermonde_log, PowerTuple};
use crate::thresholds::{qualitative_k, CoefficientTuple, KVariant};

/// Largest tail exponent; `1/M!` underflows soon after.
const MAX_TAIL_EXPONENT: u64 = 170;

/// Prescribed signs `ε_M` of the coefficients beyond the base exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignPattern {
    base: PowerTuple,
    tail: Vec<(u64, i8)>,
}

impl SignPattern {
    /// Tail exponents must exceed the base and increase strictly.
    pub fn new(base: PowerTuple, tail: Vec<(u64, i8)>) -> Result<Self> {
        if let Some(&(m, _)) = tail.iter().find(|&&(m, _)| m as f64 <= base.last()) {
            return invalid(format!("tail exponent {m} does not exceed the base"));
        }
        if tail.windows(2).any(|w| w[0].0 >= w[1].0) {
            return invalid("tail exponents must increase strictly");
        }
        if let Some(&(_, e)) = tail.iter().find(|&&(_, e)| !(-1..=1).contains(&e)) {
            return invalid(format!("sign {e} is not in {{-1, 0, 1}}"));
        }
        Ok(SignPattern { base, tail })
    }

    pub fn base(&self) -> &PowerTuple {
        &self.base
    }

    pub fn tail(&self) -> &[(u64, i8)] {
        &self.tail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rho", rename_all = "snake_case")]
pub enum SeriesDomain {
    Bounded(f64),
    Unbounded,
}

fn inv_factorial(m: u64) -> f64 {
    (1..=m).fold(1.0, |acc, k| acc / k as f64)
}

/// `Σ_M 2^{n_{N−1}−M} f_M` over `n_{N−1} < M ≤ m_max`, where each `f_M` is a
/// preserver with the sign `ε_M` at `x^M`:
///
/// * bounded: `f_M = h + ε_M δ_M x^M` with `δ_M = min(1/M!, 1/𝒦_M)` for
///   `ε_M = −1` and `1/M!` otherwise;
/// * unbounded: for `ε_M = −1`, `f_M = h − δ_M x^M + Σ_{n>M, ε_n=+1} x^n/n!`
///   with `δ_M` from [`unbounded_threshold`]; otherwise as above.
///
/// `h = Σ c_j x^{n_j}` is the base polynomial.
pub fn construct_sign_series(pattern: &SignPattern, c: &CoefficientTuple, domain: SeriesDomain, m_max: u64) -> Result<PowerSum> {
    let n = pattern.base();
    if n.len() != c.len() {
        return invalid(format!("|n| = {} but |c| = {}", n.len(), c.len()));
    }
    if m_max as f64 <= n.last() {
        return invalid("truncation must exceed the largest base exponent");
    }
    if m_max > MAX_TAIL_EXPONENT {
        return invalid(format!("truncation above {MAX_TAIL_EXPONENT}"));
    }
    let signs: BTreeMap<u64, i8> = pattern.tail().iter().copied().filter(|&(m, _)| m <= m_max).collect();
    let first = n.last().floor() as u64 + 1;
    let weight = |m: u64| 2f64.powf(n.last() - m as f64);
    let mut terms: Vec<(f64, f64)> = Vec::new();
    let total_weight: f64 = (first..=m_max).map(weight).sum();
    for (j, &e) in n.exps().iter().enumerate() {
        terms.push((e, c.values()[j] * total_weight));
    }
    let positives_after = |m: u64| signs.range(m + 1..).filter(|&(_, &s)| s == 1).map(|(&k, _)| k).collect::<Vec<_>>();
    for m in first..=m_max {
        let eps = signs.get(&m).copied().unwrap_or(0);
        let w = weight(m);
        match (eps, domain) {
            (0, _) => {}
            (1, _) => terms.push((m as f64, w * inv_factorial(m))),
            (_, SeriesDomain::Bounded(rho)) => {
                let k = tightest_k(n, c, m as f64, rho)?;
                terms.push((m as f64, -w * inv_factorial(m).min(1.0 / k)));
            }
            (_, SeriesDomain::Unbounded) => {
                let later = positives_after(m);
                if later.len() < n.len() {
                    return Err(Error::PatternInfeasible(format!(
                        "negative sign at {m} has {} later positive signs within the truncation; {} needed",
                        later.len(),
                        n.len()
                    )));
                }
                let base = n.ints().ok_or_else(|| Error::InvalidInput("unbounded construction needs integral base exponents".into()))?;
                let mut support = base.clone();
                support.extend_from_slice(&later[..n.len()]);
                let w_min = c.values().iter().copied().chain(later[..n.len()].iter().map(|&k| inv_factorial(k))).fold(f64::INFINITY, f64::min);
                let t = unbounded_threshold(&support, m, n.len())?;
                terms.push((m as f64, -w * inv_factorial(m).min(w_min / t)));
                for &k in &later {
                    terms.push((k as f64, w * inv_factorial(k)));
                }
            }
        }
    }
    let domain = match domain {
        SeriesDomain::Bounded(rho) => Domain::PositiveBounded(rho),
        SeriesDomain::Unbounded => Domain::PositiveUnbounded,
    };
    PowerSum::new(terms, domain)
}

/// Smallest full-rank threshold among the applicable variants.
fn tightest_k(n: &PowerTuple, c: &CoefficientTuple, m: f64, rho: f64) -> Result<f64> {
    let variants = [KVariant::Integer, KVariant::RealFull];
    let values: Vec<Result<f64>> = variants.iter().map(|&v| qualitative_k(n, c, m, rho, v).map(|r| r.value)).collect();
    match values.iter().filter_map(|r| r.as_ref().ok()).copied().reduce(f64::min) {
        Some(k) => Ok(k),
        None => values.into_iter().next().expect("two variants"),
    }
}

/// A `t` for which `t·Σ_{n∈S} x^n − x^M` preserves positivity on `N×N`
/// matrices over `(0, ∞)`, where `S` has at least `N` exponents on each
/// side of `M`.
///
/// Rank one: `u^{C⊔{M}} ≤ u^{C⊔{n₋}} + u^{C⊔{n₊}}` for exponents `n₋ < M < n₊`
/// of `S` outside `C`, together with the monomial sandwich, gives
/// `s_{C⊔{M}}² ≤ 2 (V(C⊔{M})/V(n_min))² Σ_B s_B²`; summing over the
/// `(N−1)`-subsets `C` of `S` bounds the rank-one threshold. The full-rank
/// value follows from the derivative at dimension `N−1`, whose coefficients
/// are at least the smallest positive exponent `w`:
/// `T_N = max(rank-one bound, M·T_{N−1}/w)`.
pub fn unbounded_threshold(support: &[u64], m: u64, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let below = support.iter().filter(|&&k| k < m).count();
    let above = support.iter().filter(|&&k| k > m).count();
    if below < n || above < n || support.contains(&m) || support.windows(2).any(|w| w[0] >= w[1]) {
        return invalid(format!("support {support:?} needs {n} distinct exponents on each side of {m}"));
    }
    let log_vmin = vandermonde_log(&(0..n).map(|k| k as f64).collect::<Vec<_>>()).1;
    let mut logs = Vec::new();
    for idx in subsets(support.len(), n - 1) {
        let mut t: Vec<f64> = idx.iter().map(|&k| support[k] as f64).collect();
        t.push(m as f64);
        logs.push(2.0 * (vandermonde_log(&t).1 - log_vmin));
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rank_one = 2.0 * top.exp() * logs.iter().map(|l| (l - top).exp()).sum::<f64>();
    let shifted: Vec<u64> = support.iter().filter(|&&k| k > 0).map(|k| k - 1).collect();
    let w = support.iter().copied().find(|&k| k > 0).expect("exponents above M exist") as f64;
    let lower = unbounded_threshold(&shifted, m - 1, n - 1)?;
    let t = rank_one.max(m as f64 * lower / w);
    if !t.is_finite() {
        return Err(Error::NumericalFailure(format!("threshold overflow at M = {m}")));
    }
    Ok(t)
}
