use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{entrywise_apply, entrywise_rank_one_exact, horn_sign_check, Domain, HornCheck, PowerSum};
use crate::error::{invalid, Result};
use crate::matrix::{det_exact, sample_psd, sample_psd_signed, subsets, sym_eigen, Matrix, SymMatrix};
use crate::rational::{self, Q};
use crate::rng::derive_seed;
use crate::symfun::{gen_vdm_det, PowerTuple};

/// Entry magnitudes cycled through on `[0, ∞)`.
const UNBOUNDED_SCALES: [f64; 5] = [1e-3, 1e-1, 1.0, 10.0, 1e3];
const HORN_STEPS: u32 = 40;
const MAX_FLOAT_SUBSETS: usize = 100_000;
/// A floating Cauchy–Binet sum counts as negative only below this fraction
/// of its absolute mass.
const FLOAT_NOISE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertConfig {
    pub samples: usize,
    /// Ranks of the sampled matrices, cycled; empty means `1..=N`.
    pub ranks: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig { samples: 10_000, ranks: vec![], tol: 1e-8, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Falsified,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    HornViolation,
    TargetedRankOne,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertWitness {
    pub kind: WitnessKind,
    /// `f[A]`, possibly a principal submatrix of the tested matrix.
    pub matrix: Matrix,
    pub min_eigenvalue: f64,
    /// `u` when `A = u uᵀ`.
    pub vector: Option<Vec<f64>>,
    /// Exact negative determinant of `matrix`, as `p/q`.
    pub negative_minor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub verdict: Verdict,
    pub samples: usize,
    pub worst_min_eigenvalue: f64,
    pub witness: Option<CertWitness>,
    pub horn: HornCheck,
}

/// Searches for a matrix `A` in the domain with `f[A]` not positive
/// semidefinite. A witness is either a minimum eigenvalue below
/// `−tol·max|f|[A]` or a principal minor that is negative, exactly for
/// integral exponents and beyond rounding noise otherwise.
pub fn certify_preserver(f: &PowerSum, n: usize, config: &CertConfig) -> Result<CertReport> {
    if n == 0 {
        return invalid("dimension must be positive");
    }
    if !(config.tol >= 0.0 && config.tol.is_finite()) {
        return invalid("tol must be finite and non-negative");
    }
    let ranks: Vec<usize> = if config.ranks.is_empty() { (1..=n).collect() } else { config.ranks.clone() };
    if ranks.iter().any(|&r| r == 0 || r > n) {
        return invalid(format!("ranks must lie in [1, {n}]"));
    }
    if ranks.iter().any(|&r| r > 1) {
        if let Some(&(e, _)) = f.terms().iter().find(|&&(e, _)| e.fract() != 0.0 && e < n as f64 - 2.0) {
            return invalid(format!("x^{e} is not admissible on full-rank {n}x{n} matrices"));
        }
    }

    let horn = horn_sign_check(f, n);
    if let Some(v) = horn.violation {
        let size = if v.above { v.positives_after } else { v.positives_before } + 1;
        let witness = horn_witness(f, size, v.above)?;
        let worst = witness.as_ref().map_or(f64::NAN, |w| w.min_eigenvalue);
        let verdict = if witness.is_some() { Verdict::Falsified } else { Verdict::Inconclusive };
        return Ok(CertReport { verdict, samples: 0, worst_min_eigenvalue: worst, witness, horn });
    }

    let sampled: Vec<(f64, f64, SymMatrix)> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, i as u64);
            let rank = ranks[i % ranks.len()];
            let a = match f.domain() {
                Domain::PositiveBounded(rho) => sample_psd(n, rho, rank, seed)?,
                Domain::PositiveUnbounded => {
                    sample_psd(n, UNBOUNDED_SCALES[(i / ranks.len()) % UNBOUNDED_SCALES.len()], rank, seed)?
                }
                Domain::TwoSided(rho) => sample_psd_signed(n, rho, rank, seed)?,
            };
            let fa = entrywise_apply(f, &a)?;
            let lambda = sym_eigen(&fa)?.min();
            Ok((lambda, magnitude(f, &a), fa))
        })
        .collect::<Result<_>>()?;

    let mut worst = f64::INFINITY;
    let mut witness: Option<CertWitness> = None;
    let mut worst_ratio = 0.0;
    for (lambda, scale, fa) in &sampled {
        worst = worst.min(*lambda);
        let ratio = lambda / scale;
        if *lambda < -config.tol * scale && ratio < worst_ratio {
            worst_ratio = ratio;
            witness = Some(CertWitness {
                kind: WitnessKind::Sampled,
                matrix: fa.matrix().clone(),
                min_eigenvalue: *lambda,
                vector: None,
                negative_minor: None,
            });
        }
    }

    let mut unclear = false;
    let probes = targeted_probes(n, f.domain());
    for u in &probes {
        let a = SymMatrix::outer(u)?;
        let fa = entrywise_apply(f, &a)?;
        let lambda = sym_eigen(&fa)?.min();
        worst = worst.min(lambda);
        if witness.as_ref().is_some_and(|w| w.kind == WitnessKind::TargetedRankOne) {
            continue;
        }
        let (negative, noisy, exact) = negative_determinant(f, u)?;
        unclear |= noisy;
        if negative || lambda < -config.tol * magnitude(f, &a) {
            witness = Some(CertWitness {
                kind: WitnessKind::TargetedRankOne,
                matrix: fa.matrix().clone(),
                min_eigenvalue: lambda,
                vector: Some(u.clone()),
                negative_minor: exact.filter(|_| negative),
            });
        }
    }

    let verdict = match (&witness, unclear) {
        (Some(_), _) => Verdict::Falsified,
        (None, true) => Verdict::Inconclusive,
        (None, false) => Verdict::Certified,
    };
    Ok(CertReport { verdict, samples: sampled.len() + probes.len(), worst_min_eigenvalue: worst, witness, horn })
}

/// Largest entry of `|f|[A]`, floored away from zero.
fn magnitude(f: &PowerSum, a: &SymMatrix) -> f64 {
    a.matrix().data().iter().map(|&x| f.abs_eval(x)).fold(f64::MIN_POSITIVE, f64::max)
}

/// Rank-one probes `u = r(1 − a − kδ)_k` approaching the corner `√ρ·1` with
/// distinct coordinates, and geometric probes `r(1, ε, ε², …)`.
fn targeted_probes(n: usize, domain: Domain) -> Vec<Vec<f64>> {
    let radii: Vec<f64> = match domain {
        Domain::PositiveBounded(rho) | Domain::TwoSided(rho) => vec![rho.sqrt()],
        Domain::PositiveUnbounded => UNBOUNDED_SCALES.iter().map(|s| s.sqrt()).collect(),
    };
    let mut probes = Vec::new();
    for &r in &radii {
        for a in [1e-2, 1e-4, 1e-6, 1e-8] {
            for delta in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
                if 1.0 - a - (n as f64 - 1.0) * delta > 0.05 {
                    probes.push((0..n).map(|k| r * (1.0 - a - k as f64 * delta)).collect());
                }
            }
        }
        for eps in [0.9, 0.5, 0.1] {
            probes.push((0..n).map(|k| r * (1.0 - 1e-6) * eps_pow(eps, k)).collect());
        }
    }
    probes
}

fn eps_pow(eps: f64, k: usize) -> f64 {
    eps.powi(k as i32)
}

/// Sign of `det f[u uᵀ]`: `(negative, noisy, exact value)`. Exact for
/// integral exponents; otherwise a floating Cauchy–Binet sum over
/// generalized Vandermonde determinants.
fn negative_determinant(f: &PowerSum, u: &[f64]) -> Result<(bool, bool, Option<String>)> {
    if f.is_integral() {
        let uq: Vec<Q> = u.iter().map(|&x| rational::from_f64(x)).collect::<Result<_>>()?;
        let d = det_exact(&entrywise_rank_one_exact(f, &uq)?)?;
        let neg = d.is_negative();
        return Ok((neg, false, Some(rational::to_string(&d))));
    }
    let terms = f.terms();
    let n = u.len();
    if terms.len() < n || binomial(terms.len(), n) > MAX_FLOAT_SUBSETS {
        return Ok((false, false, None));
    }
    let mut logs: Vec<(f64, f64)> = Vec::new();
    let mut noisy = false;
    for idx in subsets(terms.len(), n) {
        let exps = PowerTuple::new(idx.iter().map(|&k| terms[k].0).collect())?;
        let g = gen_vdm_det(u, &exps)?;
        noisy |= g.conditioning_warning;
        if g.sign == 0 {
            continue;
        }
        let sign: f64 = idx.iter().map(|&k| terms[k].1.signum()).product();
        let log = 2.0 * g.log_abs + idx.iter().map(|&k| terms[k].1.abs().ln()).sum::<f64>();
        logs.push((sign, log));
    }
    let top = logs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Ok((false, false, None));
    }
    let (sum, mass) = logs.iter().fold((0.0, 0.0), |(s, m), &(sg, l)| {
        let x = (l - top).exp();
        (s + sg * x, m + x)
    });
    let negative = sum < -FLOAT_NOISE * mass;
    // A negative sum inside the noise band, or one built from badly
    // conditioned determinants, is flagged rather than trusted.
    Ok((negative && !noisy, sum < 0.0 && (noisy || !negative), None))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// A principal `size × size` block of `f[u uᵀ]` with `u = s(1, 2, …)/size`
/// whose determinant turns negative as `s → 0` (or `s → ∞` when the
/// shortage of positive terms is above the negative one): the extreme
/// Cauchy–Binet term then involves the negative coefficient.
fn horn_witness(f: &PowerSum, size: usize, above: bool) -> Result<Option<CertWitness>> {
    let (start, factor) = match (f.domain(), above) {
        (_, true) => (1.0, 4.0),
        (Domain::PositiveBounded(rho) | Domain::TwoSided(rho), false) => (rho.sqrt() / 2.0, 0.25),
        (Domain::PositiveUnbounded, false) => (1.0, 0.25),
    };
    let mut s: f64 = start;
    for _ in 0..HORN_STEPS {
        s *= factor;
        let u: Vec<f64> = (1..=size).map(|i| s * i as f64 / size as f64).collect();
        let a = SymMatrix::outer(&u)?;
        if a.matrix().data().iter().any(|&x| !f.domain().contains(x)) {
            continue;
        }
        if !f.abs_eval(s * s).is_finite() {
            break;
        }
        let (negative, _, exact) = negative_determinant(f, &u)?;
        if negative {
            let fa = entrywise_apply(f, &a)?;
            let lambda = sym_eigen(&fa)?.min();
            return Ok(Some(CertWitness {
                kind: WitnessKind::HornViolation,
                matrix: fa.into_matrix(),
                min_eigenvalue: lambda,
                vector: Some(u),
                negative_minor: exact,
            }));
        }
    }
    Ok(None)
}
