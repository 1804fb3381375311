//! Power sums `Σ c·x^e`, their entrywise action on symmetric matrices, and
//! tools that certify or refute positivity preservation in fixed dimension.

mod certify;
mod complex;
mod sign_series;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::{subsets, RationalMatrix, SymMatrix};
use crate::rational::{self, Q};
use crate::symfun::{schur_tableaux, vandermonde_exact, PowerTuple, DEFAULT_TABLEAU_CAP};

pub use certify::{certify_preserver, CertConfig, CertReport, CertWitness, Verdict, WitnessKind};
pub use complex::{complex_counterexample, ComplexOutcome};
pub use sign_series::{construct_sign_series, unbounded_threshold, SeriesDomain, SignPattern};

/// Where the entries of the matrices live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rho", rename_all = "snake_case")]
pub enum Domain {
    /// `[0, ρ]`.
    PositiveBounded(f64),
    /// `[0, ∞)`.
    PositiveUnbounded,
    /// `[−ρ, ρ]`; integral exponents only.
    TwoSided(f64),
}

impl Domain {
    fn check(self) -> Result<Self> {
        match self {
            Domain::PositiveBounded(r) | Domain::TwoSided(r) if !(r > 0.0 && r.is_finite()) => {
                invalid("rho must be positive and finite")
            }
            d => Ok(d),
        }
    }

    pub fn contains(self, x: f64) -> bool {
        match self {
            Domain::PositiveBounded(r) => (0.0..=r).contains(&x),
            Domain::PositiveUnbounded => x >= 0.0 && x.is_finite(),
            Domain::TwoSided(r) => x.abs() <= r,
        }
    }

    pub fn rho(self) -> Option<f64> {
        match self {
            Domain::PositiveBounded(r) | Domain::TwoSided(r) => Some(r),
            Domain::PositiveUnbounded => None,
        }
    }
}

/// `Σ c·x^e` with strictly increasing exponents and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSum {
    terms: Vec<(f64, f64)>,
    domain: Domain,
}

impl PowerSum {
    /// Sorts the `(exponent, coefficient)` pairs, merges repeated exponents
    /// and drops zero coefficients.
    pub fn new(mut terms: Vec<(f64, f64)>, domain: Domain) -> Result<Self> {
        let domain = domain.check()?;
        for &(e, c) in &terms {
            if !(e >= 0.0 && e.is_finite()) {
                return invalid(format!("exponent {e} must be finite and non-negative"));
            }
            if !c.is_finite() {
                return invalid(format!("coefficient {c} is not finite"));
            }
        }
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        let f = PowerSum { terms: merged, domain };
        if matches!(domain, Domain::TwoSided(_)) && !f.is_integral() {
            return invalid("two-sided domains need integral exponents");
        }
        Ok(f)
    }

    /// Parses `c0*x^e0 + c1*x^e1 - …`; bare constants, `x`, `c*x` and
    /// `x^e` are accepted.
    pub fn parse(text: &str, domain: Domain) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return invalid("empty power sum");
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            let split = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'^' | b'*'));
            if split {
                terms.push(parse_term(&s[start..i])?);
                start = i;
            }
        }
        PowerSum::new(terms, domain)
    }

    pub fn zero(domain: Domain) -> Result<Self> {
        PowerSum::new(vec![], domain)
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(self, domain: Domain) -> Result<Self> {
        PowerSum::new(self.terms, domain)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e.fract() == 0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact `(exponent, coefficient)` pairs when every exponent is integral.
    pub fn exact_terms(&self) -> Option<Vec<(u32, Q)>> {
        if !self.is_integral() || self.terms.iter().any(|&(e, _)| e > u32::MAX as f64) {
            return None;
        }
        Some(self.terms.iter().map(|&(e, c)| (e as u32, rational::from_f64(c).expect("finite"))).collect())
    }

    /// `Σ |c|·|x|^e`, the magnitude against which rounding is measured.
    pub fn abs_eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(e, c)| c.abs() * pow_real(x.abs(), e)).sum()
    }

    pub fn eval_exact(&self, x: &Q) -> Option<Q> {
        let terms = self.exact_terms()?;
        Some(terms.iter().fold(Q::zero(), |acc, (e, c)| acc + c * rational::pow(x, *e)))
    }
}

fn parse_term(t: &str) -> Result<(f64, f64)> {
    let (sign, body) = match t.as_bytes().first() {
        Some(b'-') => (-1.0, &t[1..]),
        Some(b'+') => (1.0, &t[1..]),
        _ => (1.0, t),
    };
    let bad = || Error::InvalidInput(format!("cannot parse term {t:?}"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let (coef, var) = match body.find('x') {
        None => return Ok((0.0, sign * num(body)?)),
        Some(p) => (&body[..p], &body[p..]),
    };
    let c = match coef {
        "" => 1.0,
        s => num(s.strip_suffix('*').ok_or_else(bad)?)?,
    };
    let e = match var {
        "x" => 1.0,
        v => num(v.strip_prefix("x^").ok_or_else(bad)?)?,
    };
    Ok((e, sign * c))
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            let mag = fmt_num(c.abs());
            match (i, c < 0.0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match e {
                0.0 => write!(f, "{mag}")?,
                1.0 => write!(f, "{mag}*x")?,
                _ => write!(f, "{mag}*x^{}", fmt_num(e))?,
            }
        }
        Ok(())
    }
}

/// `x^e` with `0^0 = 1`; a negative base needs an integral exponent.
fn pow_real(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e.fract() == 0.0 && e.abs() < i32::MAX as f64 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

pub fn ps_eval(f: &PowerSum, x: f64) -> Result<f64> {
    if !f.domain.contains(x) {
        return Err(Error::DomainError(format!("{x} lies outside {:?}", f.domain)));
    }
    if x < 0.0 && !f.is_integral() {
        return Err(Error::DomainError(format!("negative base {x} with a non-integral exponent")));
    }
    Ok(f.terms.iter().map(|&(e, c)| c * pow_real(x, e)).sum())
}

/// Termwise derivative; the constant term drops out. Exponents in `(0, 1)`
/// would leave the admissible range and are rejected.
pub fn ps_derivative(f: &PowerSum) -> Result<PowerSum> {
    if let Some(&(e, _)) = f.terms.iter().find(|&&(e, _)| e > 0.0 && e < 1.0) {
        return Err(Error::DomainError(format!("derivative of x^{e} is singular at 0")));
    }
    let terms = f.terms.iter().filter(|&&(e, _)| e > 0.0).map(|&(e, c)| (e - 1.0, c * e)).collect();
    PowerSum::new(terms, f.domain)
}

/// `f[A] = (f(a_ij))`.
pub fn entrywise_apply(f: &PowerSum, a: &SymMatrix) -> Result<SymMatrix> {
    for &x in a.matrix().data() {
        ps_eval(f, x)?;
    }
    a.map(|x| f.terms.iter().map(|&(e, c)| c * pow_real(x, e)).sum())
}

/// Exact `f[u uᵀ]` for integral `f`.
pub fn entrywise_rank_one_exact(f: &PowerSum, u: &[Q]) -> Result<RationalMatrix> {
    let terms = f.exact_terms().ok_or_else(|| Error::InvalidInput("exact evaluation needs integral exponents".into()))?;
    Ok(RationalMatrix::from_fn(u.len(), u.len(), |i, j| {
        let x = &u[i] * &u[j];
        terms.iter().fold(Q::zero(), |acc, (e, c)| acc + c * rational::pow(&x, *e))
    }))
}

/// `det f[u uᵀ] = Σ_T (∏_{n∈T} c_n) s_T(u)² V(u)²` over N-subsets `T` of the
/// support, with each Schur polynomial counted by tableaux.
pub fn cauchy_binet_det(f: &PowerSum, u: &[Q]) -> Result<Q> {
    let terms = f.exact_terms().ok_or_else(|| Error::InvalidInput("Cauchy-Binet needs integral exponents".into()))?;
    let n = u.len();
    if n == 0 {
        return invalid("empty vector");
    }
    if terms.len() < n {
        return invalid(format!("support of size {} is smaller than N = {n}", terms.len()));
    }
    let v = vandermonde_exact(u);
    if v.is_zero() {
        return Ok(Q::zero());
    }
    let v2 = &v * &v;
    let mut total = Q::zero();
    for idx in subsets(terms.len(), n) {
        let exps: Vec<u64> = idx.iter().map(|&k| terms[k].0 as u64).collect();
        let s = schur_tableaux(&PowerTuple::from_ints(&exps)?, u, DEFAULT_TABLEAU_CAP)?;
        let weight = idx.iter().fold(rational::from_i64(1), |acc, &k| acc * &terms[k].1);
        total += weight * &s * &s;
    }
    Ok(total * v2)
}

/// Outcome of the Horn-type sign count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HornCheck {
    pub ok: bool,
    pub violation: Option<HornViolation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HornViolation {
    /// Exponent of the offending negative coefficient.
    pub exponent: f64,
    pub positives_before: usize,
    pub positives_after: usize,
    /// True when the shortage is among the larger exponents.
    pub above: bool,
}

/// Every negative coefficient needs N positive ones at smaller exponents
/// and, on `[0, ∞)`, N positive ones at larger exponents as well. The
/// reported violation is the first negative term on the failing side
/// (the last one when the shortage is above).
pub fn horn_sign_check(f: &PowerSum, n: usize) -> HornCheck {
    let signs: Vec<bool> = f.terms.iter().map(|&(_, c)| c > 0.0).collect();
    let total_pos = signs.iter().filter(|&&p| p).count();
    let mut pos_before = 0;
    let mut below: Option<HornViolation> = None;
    let mut above: Option<HornViolation> = None;
    for (k, &(e, _)) in f.terms.iter().enumerate() {
        if signs[k] {
            pos_before += 1;
            continue;
        }
        let v = HornViolation { exponent: e, positives_before: pos_before, positives_after: total_pos - pos_before, above: false };
        if pos_before < n && below.is_none() {
            below = Some(v);
        }
        if f.domain == Domain::PositiveUnbounded && v.positives_after < n {
            above = Some(HornViolation { above: true, ..v });
        }
    }
    let violation = below.or(above);
    HornCheck { ok: violation.is_none(), violation }
}

/// `uᵀ p[A] u` for `p(x) = t(1 + x² + … + x^{2k}) − x^{2k+1}`,
/// `u = (1, −1)` and `A = (ρ/2) u uᵀ`, evaluated exactly.
pub fn two_sided_witness(k: u32, t: f64, rho: f64) -> Result<f64> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if !(t > 0.0 && t.is_finite() && rho > 0.0 && rho.is_finite()) {
        return invalid("t and rho must be positive and finite");
    }
    let mut terms: Vec<(f64, f64)> = (0..=k).map(|i| (2.0 * i as f64, t)).collect();
    terms.push((2.0 * k as f64 + 1.0, -1.0));
    let p = PowerSum::new(terms, Domain::TwoSided(rho))?;
    let half = rational::from_f64(rho)? / rational::from_i64(2);
    let u = [rational::from_i64(1), rational::from_i64(-1)];
    let a = RationalMatrix::from_fn(2, 2, |i, j| &half * &u[i] * &u[j]);
    let mut q = Q::zero();
    for i in 0..2 {
        for j in 0..2 {
            q += &u[i] * p.eval_exact(&a[(i, j)]).expect("integral") * &u[j];
        }
    }
    Ok(rational::to_f64(&q))
}
