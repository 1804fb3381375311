use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::PowerTuple;
use crate::error::{invalid, Error, Result};
use crate::matrix::{det_exact, lu_summary, Matrix, RationalMatrix};
use crate::rational::{self, Q};

/// Largest integral exponent routed through exact arithmetic automatically.
pub const EXACT_EXPONENT_CAP: u64 = 64;
const CONDITIONING_LIMIT: f64 = 1e12;

/// `∏_{i<j} (t_j − t_i)`.
pub fn vandermonde(t: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 0..t.len() {
        for i in 0..j {
            p *= t[j] - t[i];
        }
    }
    p
}

pub fn vandermonde_exact(t: &[Q]) -> Q {
    let mut p = Q::one();
    for j in 0..t.len() {
        for i in 0..j {
            p *= &t[j] - &t[i];
        }
    }
    p
}

/// `ln |V(t)|` and sign, for tuples whose Vandermonde overflows.
pub fn vandermonde_log(t: &[f64]) -> (i32, f64) {
    let (mut sign, mut log) = (1, 0.0);
    for j in 0..t.len() {
        for i in 0..j {
            let d = t[j] - t[i];
            if d == 0.0 {
                return (0, f64::NEG_INFINITY);
            }
            if d < 0.0 {
                sign = -sign;
            }
            log += d.abs().ln();
        }
    }
    (sign, log)
}

/// Generalized Vandermonde determinant `det(u_j^{n_k})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenVdm {
    pub value: f64,
    pub sign: i32,
    pub log_abs: f64,
    /// Present when the exponents are integral and small enough.
    #[serde(skip)]
    pub exact: Option<Q>,
    pub pivot_ratio: f64,
    pub conditioning_warning: bool,
}

/// Rows follow `u` in the given order; the elimination itself runs on the
/// ascending rearrangement and the permutation sign is restored afterwards.
pub fn gen_vdm_det(u: &[f64], n: &PowerTuple) -> Result<GenVdm> {
    if u.len() != n.len() {
        return invalid(format!("|u| = {} but |n| = {}", u.len(), n.len()));
    }
    if u.iter().any(|x| !x.is_finite()) {
        return invalid("non-finite coordinate");
    }
    if n.exps().iter().any(|e| e.fract() != 0.0) && u.iter().any(|&x| x < 0.0) {
        return Err(Error::DomainError("negative base with non-integral exponent".into()));
    }
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&a, &b| u[a].total_cmp(&u[b]));
    let perm_sign = crate::matrix::tuple_sign(&order);
    let m = Matrix::from_fn(u.len(), u.len(), |i, k| pow_f(u[order[i]], n.exps()[k]));
    let lu = lu_summary(&m);
    let sign = lu.sign * perm_sign;
    let mut out = GenVdm {
        value: if sign == 0 { 0.0 } else { sign as f64 * lu.log_abs.exp() },
        sign,
        log_abs: lu.log_abs,
        exact: None,
        pivot_ratio: lu.pivot_ratio,
        conditioning_warning: lu.sign != 0 && lu.pivot_ratio > CONDITIONING_LIMIT,
    };
    if let Some(ints) = n.ints() {
        if ints.iter().all(|&e| e <= EXACT_EXPONENT_CAP) {
            let uq = u.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
            let d = gen_vdm_det_exact(&uq, &ints)?;
            out.sign = sign_of(&d);
            out.value = rational::to_f64(&d);
            out.log_abs = if d.is_zero() { f64::NEG_INFINITY } else { log_abs_q(&d) };
            out.exact = Some(d);
        }
    }
    Ok(out)
}

/// `x^e` with `0^0 = 1`.
pub(crate) fn pow_f(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e.fract() == 0.0 && e.abs() < i32::MAX as f64 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

fn sign_of(q: &Q) -> i32 {
    use num_traits::Signed;
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn log_abs_q(q: &Q) -> f64 {
    use num_traits::Signed;
    let n = q.numer().abs();
    let d = q.denom();
    big_ln(&n) - big_ln(d)
}

fn big_ln(x: &num_bigint::BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift as usize).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn gen_vdm_det_exact(u: &[Q], n: &[u64]) -> Result<Q> {
    if u.len() != n.len() {
        return invalid(format!("|u| = {} but |n| = {}", u.len(), n.len()));
    }
    let m = RationalMatrix::from_fn(u.len(), u.len(), |i, k| rational::pow(&u[i], n[k] as u32));
    det_exact(&m)
}

/// Schur polynomial as the ratio `det(u^{∘n}) / V(u)`. Coincident
/// coordinates are handled by exact polynomial interpolation along the line
/// `u + t·(0, 1, …, N−1)`, on which all coordinates are distinct for all
/// but finitely many `t`.
pub fn schur_bialternant(n: &[u64], u: &[Q]) -> Result<Q> {
    if u.len() != n.len() {
        return invalid(format!("|u| = {} but |n| = {}", u.len(), n.len()));
    }
    PowerTuple::from_ints(n)?;
    let v = vandermonde_exact(u);
    if !v.is_zero() {
        return Ok(gen_vdm_det_exact(u, n)? / v);
    }
    let len = n.len();
    let degree: u64 = n.iter().enumerate().map(|(i, &e)| e - i as u64).sum();
    let mut ts: Vec<Q> = Vec::new();
    let mut vals: Vec<Q> = Vec::new();
    let mut t = 1i64;
    while ts.len() as u64 <= degree {
        let tq = rational::from_i64(t);
        let shifted: Vec<Q> = (0..len).map(|i| &u[i] + &tq * rational::from_i64(i as i64)).collect();
        let vs = vandermonde_exact(&shifted);
        if !vs.is_zero() {
            vals.push(gen_vdm_det_exact(&shifted, n)? / vs);
            ts.push(tq);
        }
        t += 1;
    }
    let mut total = Q::zero();
    for i in 0..ts.len() {
        let mut w = vals[i].clone();
        for j in 0..ts.len() {
            if i != j {
                w *= -&ts[j] / (&ts[i] - &ts[j]);
            }
        }
        total += w;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde(&[1.0, 2.0, 3.0]), 2.0);
        assert_eq!(vandermonde(&[5.0]), 1.0);
        assert_eq!(vandermonde(&[0.0, 2.0, 4.0]), 16.0);
        assert_eq!(vandermonde_exact(&[from_i64(0), from_i64(2), from_i64(4)]), from_i64(16));
        let (s, l) = vandermonde_log(&[0.0, 2.0, 4.0]);
        assert_eq!(s, 1);
        assert!((l - 16f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gen_vdm_examples() {
        let n = PowerTuple::from_ints(&[0, 2]).unwrap();
        let g = gen_vdm_det(&[1.0, 2.0], &n).unwrap();
        assert_eq!(g.exact, Some(from_i64(3)));
        assert_eq!(g.value, 3.0);
        assert_eq!(gen_vdm_det(&[2.0, 2.0], &n).unwrap().value, 0.0);
        let half = PowerTuple::new(vec![0.0, 0.5]).unwrap();
        let g = gen_vdm_det(&[1.0, 4.0], &half).unwrap();
        assert!((g.value - 1.0).abs() < 1e-15 && g.exact.is_none());
        // Row order follows u.
        assert_eq!(gen_vdm_det(&[2.0, 1.0], &n).unwrap().value, -3.0);
        assert!(gen_vdm_det(&[1.0], &n).is_err());
    }

    #[test]
    fn conditioning_is_flagged() {
        let n = PowerTuple::new(vec![0.0, 0.5, 1.5, 2.5]).unwrap();
        let g = gen_vdm_det(&[1.0, 1.0 + 1e-5, 1.0 + 2e-5, 1.0 + 3e-5], &n).unwrap();
        assert!(g.conditioning_warning, "pivot ratio {}", g.pivot_ratio);
        let g = gen_vdm_det(&[1.0, 2.0, 3.0, 4.0], &n).unwrap();
        assert!(!g.conditioning_warning);
    }

    #[test]
    fn bialternant_at_coincident_points() {
        let ones = vec![from_i64(1); 3];
        assert_eq!(schur_bialternant(&[0, 2, 4], &ones).unwrap(), from_i64(8));
        let u = vec![from_i64(1), from_i64(2), from_i64(3)];
        assert_eq!(schur_bialternant(&[0, 2, 4], &u).unwrap(), from_i64(60));
        // (u1 + u2)(u2 + u3)(u3 + u1) at (2, 2, 5).
        let u = vec![from_i64(2), from_i64(2), from_i64(5)];
        assert_eq!(schur_bialternant(&[0, 2, 4], &u).unwrap(), from_i64(4 * 7 * 7));
    }
}
