//! Weak majorization and the inequalities it controls: the normalized
//! generalized Vandermonde criterion on `[1, ∞)^N`, monotonicity of
//! determinant ratios, and log-supermodularity of minors of strictly
//! totally positive matrices under meet and join of index tuples.

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::{det_exact, det_lu, is_strictly_tp, minor, minor_exact, IndexTuple, Matrix, RationalMatrix, DEFAULT_TP_CAP};
use crate::rational::Q;
use crate::rng::{derive_seed, generator};
use crate::symfun::{gen_vdm_det, schur_ratio, vandermonde_log, PositiveVector, PowerTuple, DEFAULT_DISTINCT_GAP};

/// Absolute slack on prefix sums of real tuples.
pub const MAJORIZATION_TOL: f64 = 1e-12;
/// Relative slack on the determinant criterion.
pub const CGS_TOL: f64 = 1e-9;
/// Relative slack on ratio monotonicity.
pub const MONOTONE_TOL: f64 = 1e-9;
/// Probes spent by the converse search.
pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Majorization {
    /// Every prefix sum dominates and the totals agree.
    Majorizes,
    /// Every prefix sum dominates.
    WeaklyMajorizes,
    Neither,
}

fn decreasing(t: &[f64]) -> Vec<f64> {
    let mut s = t.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Compares prefix sums of the decreasing rearrangements of `m` and `n`.
pub fn weak_majorize(m: &[f64], n: &[f64]) -> Result<Majorization> {
    if m.len() != n.len() || m.is_empty() {
        return invalid(format!("lengths {} and {} differ or vanish", m.len(), n.len()));
    }
    if m.iter().chain(n).any(|x| !x.is_finite()) {
        return invalid("non-finite coordinate");
    }
    let (dm, dn) = (decreasing(m), decreasing(n));
    let (mut sm, mut sn) = (0.0, 0.0);
    for k in 0..dm.len() {
        sm += dm[k];
        sn += dn[k];
        if sm < sn - MAJORIZATION_TOL {
            return Ok(Majorization::Neither);
        }
    }
    Ok(if (sm - sn).abs() <= MAJORIZATION_TOL { Majorization::Majorizes } else { Majorization::WeaklyMajorizes })
}

pub fn weak_majorize_exact(m: &[Q], n: &[Q]) -> Result<Majorization> {
    if m.len() != n.len() || m.is_empty() {
        return invalid(format!("lengths {} and {} differ or vanish", m.len(), n.len()));
    }
    let sort = |t: &[Q]| {
        let mut s = t.to_vec();
        s.sort_by(|a, b| b.cmp(a));
        s
    };
    let (dm, dn) = (sort(m), sort(n));
    let (mut sm, mut sn) = (Q::zero(), Q::zero());
    for k in 0..dm.len() {
        sm += &dm[k];
        sn += &dn[k];
        if sm < sn {
            return Ok(Majorization::Neither);
        }
    }
    Ok(if sm == sn { Majorization::Majorizes } else { Majorization::WeaklyMajorizes })
}

fn sorted_distinct(name: &str, t: &[f64]) -> Result<PowerTuple> {
    let mut s = t.to_vec();
    s.sort_by(f64::total_cmp);
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateInput(format!("{name} has coincident coordinates")));
    }
    PowerTuple::new(s)
}

/// Both sides of `|det u^{∘m}|/|V(m)| ≥ |det u^{∘n}|/|V(n)|` in log form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgsReport {
    pub holds: bool,
    pub log_lhs: f64,
    pub log_rhs: f64,
}

/// The determinant criterion at one `u ∈ [1, ∞)^N`; sides are compared with
/// relative slack [`CGS_TOL`].
pub fn cgs_check(m: &[f64], n: &[f64], u: &[f64]) -> Result<CgsReport> {
    if m.len() != n.len() || m.len() != u.len() {
        return invalid("m, n and u must have equal lengths");
    }
    if u.iter().any(|&x| !(x >= 1.0 && x.is_finite())) {
        return invalid("u must lie in [1, inf)");
    }
    let pm = sorted_distinct("m", m)?;
    let pn = sorted_distinct("n", n)?;
    let mut su = u.to_vec();
    su.sort_by(f64::total_cmp);
    if su.windows(2).any(|w| w[1] - w[0] <= DEFAULT_DISTINCT_GAP * w[1]) {
        return Err(Error::DegenerateInput("u has coincident coordinates".into()));
    }
    let side = |p: &PowerTuple| -> Result<f64> { Ok(gen_vdm_det(&su, p)?.log_abs - vandermonde_log(p.exps()).1) };
    let (log_lhs, log_rhs) = (side(&pm)?, side(&pn)?);
    Ok(CgsReport { holds: log_lhs >= log_rhs + (1.0 - CGS_TOL).ln(), log_lhs, log_rhs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ConverseOutcome {
    /// A point where the criterion fails; `probe` is its position in the schedule.
    Violation { u: Vec<f64>, report: CgsReport, probe: usize },
    /// No violation within the budget; this proves nothing.
    Inconclusive { probes: usize },
}

/// Looks for `u` violating the criterion, which exists when `m` does not
/// weakly majorize `n`. Structured probes come first: for each `k`, the top
/// `k` coordinates are pushed to `t·(1 + j/10)` for `t = 10, …, 10¹²`,
/// making the determinants grow like the top-`k` exponent sums. The rest of
/// the budget is log-uniform random points in `[1, 10⁶]^N`. The first
/// violation in schedule order is returned.
pub fn cgs_converse_search(m: &[f64], n: &[f64], budget: usize, seed: u64) -> Result<ConverseOutcome> {
    let len = m.len();
    if len == 0 || n.len() != len {
        return invalid("m and n must have equal positive lengths");
    }
    sorted_distinct("m", m)?;
    sorted_distinct("n", n)?;
    let mut schedule: Vec<Vec<f64>> = Vec::new();
    for k in 1..=len {
        for p in 1..=12 {
            let t = 10f64.powi(p);
            schedule.push((0..len).map(|j| (1.0 + j as f64 / 10.0) * if j >= len - k { t } else { 1.0 }).collect());
        }
    }
    schedule.truncate(budget);
    for i in schedule.len()..budget {
        let mut rng = generator(derive_seed(seed, i as u64));
        schedule.push((0..len).map(|_| (rng.random::<f64>() * 6.0 * std::f64::consts::LN_10).exp()).collect());
    }
    let results: Vec<Option<CgsReport>> = schedule
        .par_iter()
        .map(|u| match cgs_check(m, n, u) {
            Ok(r) => Ok((!r.holds).then_some(r)),
            // Random probes may collide; m and n were validated above.
            Err(Error::DegenerateInput(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    Ok(match results.iter().position(Option::is_some) {
        Some(p) => ConverseOutcome::Violation { u: schedule[p].clone(), report: results[p].unwrap(), probe: p },
        None => ConverseOutcome::Inconclusive { probes: schedule.len() },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub holds: bool,
    pub before: f64,
    pub after: f64,
}

/// `det u^{∘m}/det u^{∘n}` moves with `u_j` in the direction of `h` when
/// `m ≥ n` coordinatewise.
pub fn ratio_monotone_check(m: &PowerTuple, n: &PowerTuple, u: &PositiveVector, j: usize, h: f64) -> Result<RatioCheck> {
    if m.len() != n.len() || u.len() != m.len() || j >= u.len() {
        return invalid("length mismatch or coordinate out of range");
    }
    if let Some(k) = (0..m.len()).find(|&k| m.exps()[k] < n.exps()[k]) {
        return Err(Error::PreconditionViolated(format!("m_{k} = {} < n_{k} = {}", m.exps()[k], n.exps()[k])));
    }
    let mut moved = u.coords().to_vec();
    moved[j] += h;
    let moved = PositiveVector::new(moved)?;
    let before = schur_ratio(u, m, n, DEFAULT_DISTINCT_GAP)?;
    let after = schur_ratio(&moved, m, n, DEFAULT_DISTINCT_GAP)?;
    let holds = (after - before) * h.signum() >= -MONOTONE_TOL * before.abs();
    Ok(RatioCheck { holds, before, after })
}

/// The permutation sorting a tuple.
fn ordering(t: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..t.len()).collect();
    p.sort_by_key(|&k| t[k]);
    p
}

/// Coordinatewise minimum and maximum of two tuples with the same ordering;
/// both results keep that ordering.
pub fn tuple_meet_join(a: &IndexTuple, b: &IndexTuple) -> Result<(IndexTuple, IndexTuple)> {
    if a.len() != b.len() {
        return invalid("tuples differ in length");
    }
    let ord = ordering(a.indices());
    if ord != ordering(b.indices()) {
        return Err(Error::PreconditionViolated(format!("{:?} and {:?} are ordered differently", a.indices(), b.indices())));
    }
    let bound = a.indices().iter().chain(b.indices()).copied().max().unwrap_or(0);
    let zip = |f: fn(usize, usize) -> usize| a.indices().iter().zip(b.indices()).map(|(&x, &y)| f(x, y)).collect::<Vec<_>>();
    let meet = IndexTuple::new(zip(usize::min), bound)?;
    let join = IndexTuple::new(zip(usize::max), bound)?;
    assert_eq!(ordering(meet.indices()), ord);
    assert_eq!(ordering(join.indices()), ord);
    Ok((meet, join))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogsupReport {
    /// `det A_{I∧,J∧} det A_{I∨,J∨} − det A_{I₁,J₁} det A_{I₂,J₂}`.
    pub residual: f64,
    /// Sum of the magnitudes of the two products.
    pub scale: f64,
    pub meet: (Vec<usize>, Vec<usize>),
    pub join: (Vec<usize>, Vec<usize>),
}

impl LogsupReport {
    pub fn holds(&self, rel: f64) -> bool {
        self.residual >= -rel * self.scale
    }
}

/// Log-supermodularity residual after confirming strict total positivity
/// (up to the minor-size cap).
pub fn logsup_check(a: &Matrix, i1: &IndexTuple, i2: &IndexTuple, j1: &IndexTuple, j2: &IndexTuple) -> Result<LogsupReport> {
    let tp = is_strictly_tp(a, DEFAULT_TP_CAP)?;
    if !tp.strictly_tp {
        return Err(Error::PreconditionViolated(format!("matrix is not strictly totally positive; witness {:?}", tp.witness)));
    }
    logsup_residual(a, i1, i2, j1, j2)
}

/// As [`logsup_check`] for matrices that are strictly totally positive by
/// construction, such as generalized Vandermonde matrices with increasing
/// parameters.
pub fn logsup_residual(a: &Matrix, i1: &IndexTuple, i2: &IndexTuple, j1: &IndexTuple, j2: &IndexTuple) -> Result<LogsupReport> {
    let (im, ij) = tuple_meet_join(i1, i2)?;
    let (jm, jj) = tuple_meet_join(j1, j2)?;
    let d = |r: &IndexTuple, c: &IndexTuple| -> Result<f64> { Ok(det_lu(&minor(a, r, c)?)) };
    let upper = d(&im, &jm)? * d(&ij, &jj)?;
    let lower = d(i1, j1)? * d(i2, j2)?;
    Ok(LogsupReport {
        residual: upper - lower,
        scale: upper.abs() + lower.abs(),
        meet: (im.indices().to_vec(), jm.indices().to_vec()),
        join: (ij.indices().to_vec(), jj.indices().to_vec()),
    })
}

/// Exact residual over the rationals.
pub fn logsup_residual_exact(a: &RationalMatrix, i1: &IndexTuple, i2: &IndexTuple, j1: &IndexTuple, j2: &IndexTuple) -> Result<Q> {
    let (im, ij) = tuple_meet_join(i1, i2)?;
    let (jm, jj) = tuple_meet_join(j1, j2)?;
    let d = |r: &IndexTuple, c: &IndexTuple| det_exact(&minor_exact(a, r, c)?);
    Ok(d(&im, &jm)? * d(&ij, &jj)? - d(i1, j1)? * d(i2, j2)?)
}

#[cfg(test)]
mod tests;
