//! Thresholds for `t·Σ c_j x^{n_j} − x^M` to preserve positivity entrywise:
//! the sharp rank-one constant, the explicit full-rank constants, the
//! two-sided bound, series and Laplace-transform thresholds, per-matrix
//! Rayleigh thresholds, and matrix-cube bounds.

mod cube;
mod rank1;
mod series;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::symfun::PowerTuple;

pub use cube::{cube_asymptotic_scan, cube_bounds, CubeBounds, CubeScanPoint, TupleFamily};
pub use rank1::{rank1_threshold_at, rayleigh_threshold, PINV_CUTOFF};
pub use series::{series_threshold, SeriesTail, SERIES_TOL};

/// Above this size Vandermonde ratios are accumulated in log space.
const LOG_SPACE_FROM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    SharpC,
    KInteger,
    KRealRank1,
    KRealFull,
    TwoSided,
    Series,
    Laplace,
    Rayleigh,
    Rank1At,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KVariant {
    Integer,
    RealRank1,
    RealFull,
    TwoSided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdInputs {
    pub n: Vec<f64>,
    pub c: Vec<f64>,
    pub m: Option<f64>,
    pub rho: Option<f64>,
    pub extras: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub value: f64,
    pub formula: Formula,
    pub inputs: ThresholdInputs,
    pub witness: Option<Vec<f64>>,
}

impl ThresholdReport {
    fn new(value: f64, formula: Formula, inputs: ThresholdInputs) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NumericalFailure(format!("threshold {value} is not positive and finite")));
        }
        Ok(ThresholdReport { value, formula, inputs, witness: None })
    }
}

/// Positive coefficients `c_{n_0}, …, c_{n_{N−1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTuple(Vec<f64>);

impl CoefficientTuple {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() || c.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return invalid("coefficients must be positive and finite");
        }
        Ok(CoefficientTuple(c))
    }

    pub fn ones(n: usize) -> Self {
        CoefficientTuple(vec![1.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_common(n: &PowerTuple, c: &CoefficientTuple, m: f64, rho: f64) -> Result<()> {
    if n.len() != c.len() {
        return invalid(format!("|n| = {} but |c| = {}", n.len(), c.len()));
    }
    if !(m > n.last()) || !m.is_finite() {
        return invalid(format!("M = {m} must exceed the largest exponent {}", n.last()));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return invalid("rho must be positive and finite");
    }
    Ok(())
}

fn inputs(n: &PowerTuple, c: &CoefficientTuple, m: f64, rho: f64) -> ThresholdInputs {
    ThresholdInputs { n: n.exps().to_vec(), c: c.values().to_vec(), m: Some(m), rho: Some(rho), extras: vec![] }
}

/// `ln(V(n_j)² / V(n)²) = 2 Σ_{k≠j} ln|M − n_k| − ln|n_j − n_k|`.
fn log_replaced_ratio_sq(n: &[f64], j: usize, m: f64) -> f64 {
    let mut s = 0.0;
    for (k, &nk) in n.iter().enumerate() {
        if k != j {
            s += 2.0 * ((m - nk).ln() - (n[j] - nk).abs().ln());
        }
    }
    s
}

fn replaced_ratio_sq(n: &[f64], j: usize, m: f64) -> f64 {
    if n.len() >= LOG_SPACE_FROM {
        return log_replaced_ratio_sq(n, j, m).exp();
    }
    let mut p = 1.0;
    for (k, &nk) in n.iter().enumerate() {
        if k != j {
            let r = (m - nk) / (n[j] - nk);
            p *= r * r;
        }
    }
    p
}

/// `ln(V(n) / V(n_min))`.
fn log_weyl(n: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..n.len() {
        for i in 0..j {
            s += (n[j] - n[i]).ln() - ((j - i) as f64).ln();
        }
    }
    s
}

fn weyl_sq(n: &[f64]) -> f64 {
    if n.len() >= LOG_SPACE_FROM {
        return (2.0 * log_weyl(n)).exp();
    }
    let mut p = 1.0;
    for j in 0..n.len() {
        for i in 0..j {
            let r = (n[j] - n[i]) / (j - i) as f64;
            p *= r * r;
        }
    }
    p
}

/// `Σ_j w_j · V(n_j)²/V(n)² · ρ^{M−n_j}/c_j` with per-term weights.
fn weighted_sum(n: &[f64], c: &[f64], m: f64, rho: f64, scale_sq: f64, weight: impl Fn(usize) -> f64) -> f64 {
    let big = n.len() >= LOG_SPACE_FROM;
    (0..n.len())
        .map(|j| {
            if big {
                (log_replaced_ratio_sq(n, j, m) + scale_sq.ln() + (m - n[j]) * rho.ln() - c[j].ln() + weight(j).ln()).exp()
            } else {
                weight(j) * scale_sq * replaced_ratio_sq(n, j, m) * rho.powf(m - n[j]) / c[j]
            }
        })
        .sum()
}

/// Sharp rank-one threshold `Σ_j V(n_j)²/V(n)² · ρ^{M−n_j}/c_j`.
pub fn sharp_c(n: &PowerTuple, c: &CoefficientTuple, m: f64, rho: f64) -> Result<ThresholdReport> {
    check_common(n, c, m, rho)?;
    let v = weighted_sum(n.exps(), c.values(), m, rho, 1.0, |_| 1.0);
    ThresholdReport::new(v, Formula::SharpC, inputs(n, c, m, rho))
}

/// Smallest consecutive gap of `(n, M)`.
pub fn min_gap(n: &PowerTuple, m: f64) -> f64 {
    let e = n.exps();
    e.windows(2).map(|w| w[1] - w[0]).fold(m - n.last(), f64::min)
}

/// `(N−1−α)!² / ∏_{k>α} (n_k − n_α)²`.
fn g_factor(n: &[f64], alpha: usize) -> f64 {
    let len = n.len();
    let mut log = 0.0;
    for i in 1..len - alpha {
        log += 2.0 * (i as f64).ln();
    }
    for k in alpha + 1..len {
        log -= 2.0 * (n[k] - n[alpha]).ln();
    }
    log.exp()
}

/// The explicit thresholds. `Integer` needs integral exponents,
/// `RealFull` needs each exponent in ℤ≥0 ∪ [N−2, ∞), and `TwoSided` needs
/// `n = (0, …, N−2, N−1+2r)`.
pub fn qualitative_k(n: &PowerTuple, c: &CoefficientTuple, m: f64, rho: f64, variant: KVariant) -> Result<ThresholdReport> {
    check_common(n, c, m, rho)?;
    let (e, cv, len) = (n.exps(), c.values(), n.len());
    let mut inp = inputs(n, c, m, rho);
    let (value, formula) = match variant {
        KVariant::Integer => {
            if !n.is_integral() || m.fract() != 0.0 {
                return invalid("integer variant needs integral exponents and M");
            }
            (weighted_sum(e, cv, m, rho, weyl_sq(e), |_| 1.0), Formula::KInteger)
        }
        KVariant::RealRank1 => {
            let delta = min_gap(n, m);
            let pre = delta.powf(-((len * (len - 1)) as f64));
            inp.extras.push(("delta".into(), delta));
            (pre * weighted_sum(e, cv, m, rho, weyl_sq(e), |_| 1.0), Formula::KRealRank1)
        }
        KVariant::RealFull => {
            if !n.is_full_rank_feasible() {
                return invalid("real_full variant needs every exponent in Z>=0 or >= N-2");
            }
            let delta = min_gap(n, m);
            let pre = delta.powf(-((len * (len - 1)) as f64)).max(1.0);
            let prefix: Vec<f64> = (0..len)
                .scan(1.0, |acc, j| {
                    let cur = *acc;
                    *acc *= g_factor(e, j).max(1.0);
                    Some(cur)
                })
                .collect();
            inp.extras.push(("delta".into(), delta));
            (pre * weighted_sum(e, cv, m, rho, weyl_sq(e), |j| prefix[j]), Formula::KRealFull)
        }
        KVariant::TwoSided => {
            let r = n.two_sided_degree().ok_or_else(|| Error::InvalidInput("two_sided variant needs n = (0, ..., N-2, N-1+2r)".into()))?;
            let mut pre = 1.0;
            for i in 1..=r {
                pre *= 2.0 * i as f64;
            }
            // V(n_j)² itself: the ratio to V(n)² times V(n)².
            let vn_sq = (2.0 * crate::symfun::vandermonde_log(e).1).exp();
            inp.extras.push(("r".into(), r as f64));
            (pre * weighted_sum(e, cv, m, len as f64 * rho, vn_sq, |_| 1.0), Formula::TwoSided)
        }
    };
    ThresholdReport::new(value, formula, inp)
}
