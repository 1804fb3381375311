//! Conversions between `f64`, decimal strings and exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Q = BigRational;

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<Q> {
    BigRational::from_float(x).ok_or_else(|| crate::Error::InvalidInput(format!("non-finite value {x}")))
}

pub fn from_i64(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Nearest double; saturates to ±inf outside the representable range.
pub fn to_f64(q: &Q) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(v) = q.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    // Fallback through bit lengths keeps huge or tiny ratios finite where possible.
    let n = q.numer().abs();
    let d = q.denom().clone();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n, d << (shift as usize))
    } else {
        (n << ((-shift) as usize), d)
    };
    let mant = Q::new(n2, d2).to_f64().unwrap_or(1.0);
    let v = mant * 2f64.powi(shift.clamp(-2000, 2000) as i32);
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Parses `"3"`, `"-0.125"`, `"1e-3"`, `"2/7"` exactly.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return invalid("empty number");
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad(s))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad(s))?;
        if q.is_zero() {
            return invalid(format!("zero denominator in {s}"));
        }
        return Ok(Q::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad(s))?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad(s));
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad(s));
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad(s))?;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Q::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

fn bad(s: &str) -> crate::Error {
    crate::Error::InvalidInput(format!("cannot parse number {s:?}"))
}

pub fn pow(q: &Q, e: u32) -> Q {
    if e == 0 {
        return Q::one();
    }
    num_traits::pow(q.clone(), e as usize)
}

/// `"p/q"`, or `"p"` for integers.
pub fn to_string(q: &Q) -> String {
    q.to_string()
}
