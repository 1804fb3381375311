//! Schur polynomials, Vandermonde and generalized Vandermonde determinants,
//! principal specializations, monomial bounds and complete homogeneous
//! symmetric polynomials.

mod tableaux;
mod tuple;
mod vandermonde;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{self, Q};

pub use tableaux::{schur_last_variable, schur_tableaux, shape, tableau_count, DEFAULT_TABLEAU_CAP};
pub use tuple::{PositiveVector, PowerTuple};
pub use vandermonde::{
    gen_vdm_det, gen_vdm_det_exact, schur_bialternant, vandermonde, vandermonde_exact, vandermonde_log, GenVdm,
    EXACT_EXPONENT_CAP,
};
pub(crate) use vandermonde::pow_f;

/// Relative gap below which two coordinates count as coincident.
pub const DEFAULT_DISTINCT_GAP: f64 = 1e-8;

/// `V(n) / V(n_min)` for integral `n`.
pub fn weyl_dimension_exact(n: &[u64]) -> Q {
    let t: Vec<Q> = n.iter().map(|&e| rational::from_i64(e as i64)).collect();
    let m: Vec<Q> = (0..n.len()).map(|i| rational::from_i64(i as i64)).collect();
    vandermonde_exact(&t) / vandermonde_exact(&m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylDimension {
    pub value: f64,
    /// `"p/q"` when the tuple is integral.
    pub exact: Option<String>,
}

/// `V(n) / V(n_min)`, the number of tableaux of the shape when integral.
pub fn weyl_dimension(n: &PowerTuple) -> WeylDimension {
    match n.ints() {
        Some(ints) => {
            let q = weyl_dimension_exact(&ints);
            WeylDimension { value: rational::to_f64(&q), exact: Some(rational::to_string(&q)) }
        }
        None => {
            let (_, a) = vandermonde_log(n.exps());
            let (_, b) = vandermonde_log(PowerTuple::minimal(n.len()).exps());
            WeylDimension { value: (a - b).exp(), exact: None }
        }
    }
}

/// `∏_{i<j} (ε^{n_j} − ε^{n_i}) / (ε^j − ε^i)`, the value of the Schur
/// ratio at `(1, ε, …, ε^{N−1})`.
pub fn principal_specialization(n: &PowerTuple, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || eps == 1.0 || !eps.is_finite() {
        return invalid(format!("specialization point {eps} must be positive and different from 1"));
    }
    let l = eps.ln();
    let e = n.exps();
    let mut log = 0.0;
    for j in 0..e.len() {
        for i in 0..j {
            // ε^{n_j} − ε^{n_i} = ε^{n_i}·expm1((n_j − n_i) ln ε); both factors share a sign.
            let num = ((e[j] - e[i]) * l).exp_m1();
            let den = ((j - i) as f64 * l).exp_m1();
            log += (e[i] - i as f64) * l + (num / den).ln();
        }
    }
    Ok(log.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

/// `u^{n − n_min} ≤ s_n(u) ≤ (V(n)/V(n_min))·u^{n − n_min}` for ascending `u`.
pub fn monomial_bounds(u: &PositiveVector, n: &PowerTuple) -> Result<MonomialBounds> {
    if u.len() != n.len() {
        return invalid(format!("|u| = {} but |n| = {}", u.len(), n.len()));
    }
    if !u.is_sorted() {
        return invalid("u must be sorted ascending");
    }
    if !n.is_integral() && !n.is_one_separated() {
        return Err(Error::PreconditionViolated("real exponents must have consecutive gaps of at least 1".into()));
    }
    let x = u.coords();
    let lower = x.iter().zip(n.exps()).enumerate().map(|(i, (&xi, &e))| pow_f(xi, e - i as f64)).product::<f64>();
    let upper = weyl_dimension(n).value * lower;
    let value = schur_value(x, n)?;
    Ok(MonomialBounds { lower, value, upper })
}

/// `s_n(u)` for positive `u`: exact for integral `n`, otherwise the
/// floating ratio of determinants (distinct coordinates required).
pub fn schur_value(u: &[f64], n: &PowerTuple) -> Result<f64> {
    if let Some(ints) = n.ints() {
        if ints.iter().all(|&e| e <= EXACT_EXPONENT_CAP) {
            let uq = u.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
            return Ok(rational::to_f64(&schur_bialternant(&ints, &uq)?));
        }
    }
    let (vs, vl) = vandermonde_log(u);
    if vs == 0 {
        return Err(Error::DegenerateInput("coincident coordinates with real exponents".into()));
    }
    let g = gen_vdm_det(u, n)?;
    Ok((g.sign * vs) as f64 * (g.log_abs - vl).exp())
}

/// `(h_{2r}(u), ‖u‖^{2r} / (2^r r!))`.
pub fn complete_homogeneous(u: &[f64], degree: u32) -> Result<(f64, f64)> {
    if degree % 2 == 1 {
        return invalid(format!("degree {degree} is odd"));
    }
    let k = degree as usize;
    // h[d] holds h_d over the prefix processed so far.
    let mut h = vec![0.0; k + 1];
    h[0] = 1.0;
    for &x in u {
        for d in 1..=k {
            h[d] += x * h[d - 1];
        }
    }
    let r = degree / 2;
    let norm2: f64 = u.iter().map(|x| x * x).sum();
    let mut bound = norm2.powi(r as i32);
    for i in 1..=r {
        bound /= 2.0 * i as f64;
    }
    Ok((h[k], bound))
}

/// `det(u^{∘m}) / det(u^{∘n})`.
pub fn schur_ratio(u: &PositiveVector, m: &PowerTuple, n: &PowerTuple, gap: f64) -> Result<f64> {
    if u.len() != m.len() || u.len() != n.len() {
        return invalid("length mismatch");
    }
    let x = u.coords();
    let scale = x.iter().fold(0.0f64, |a, &b| a.max(b));
    for j in 0..x.len() {
        for i in 0..j {
            if (x[i] - x[j]).abs() < gap * scale {
                return Err(Error::DegenerateInput(format!("coordinates {} and {} are closer than {gap} relative", x[i], x[j])));
            }
        }
    }
    let a = gen_vdm_det(x, m)?;
    let b = gen_vdm_det(x, n)?;
    if let (Some(p), Some(q)) = (&a.exact, &b.exact) {
        return Ok(rational::to_f64(&(p / q)));
    }
    Ok((a.sign * b.sign) as f64 * (a.log_abs - b.log_abs).exp())
}
