//! Schur polynomials as generating functions of column-strict tableaux.
//!
//! The shape is the reversal of `n − n_min`. Tableaux with entries `1..N`
//! are chains of partitions in which each step adds a horizontal strip, so
//! `s_λ(u_1..u_k) = Σ_ν s_ν(u_1..u_{k−1}) · u_k^{|λ/ν|}` over `ν` interlacing
//! `λ`. Counts and values are memoized per `(k, ν)`.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};

use super::{weyl_dimension_exact, PowerTuple};
use crate::error::{invalid, Error, Result};
use crate::rational::Q;

pub const DEFAULT_TABLEAU_CAP: u64 = 1_000_000;

/// Shape of the tableaux for exponents `n`: `λ_i = n_{N−i} − (N−i)`.
pub fn shape(n: &[u64]) -> Vec<u64> {
    let len = n.len();
    (0..len).map(|i| n[len - 1 - i] - (len - 1 - i) as u64).collect()
}

/// `Σ_T u^{T}` over column-strict tableaux; exact.
pub fn schur_tableaux(n: &PowerTuple, u: &[Q], cap: u64) -> Result<Q> {
    let ints = n.ints().ok_or_else(|| Error::InvalidInput("tableau engine needs integral exponents".into()))?;
    if u.len() != ints.len() {
        return invalid(format!("|u| = {} but |n| = {}", u.len(), ints.len()));
    }
    check_cap(&ints, cap)?;
    let lambda = shape(&ints);
    let mut dp = Dp { u, memo: HashMap::new() };
    Ok(dp.eval(u.len(), &lambda))
}

/// Number of tableaux of the shape, counted by the same recursion at `u = 1`.
pub fn tableau_count(n: &PowerTuple, cap: u64) -> Result<u64> {
    let len = n.len();
    let ones = vec![Q::one(); len];
    let v = schur_tableaux(n, &ones, cap)?;
    v.to_integer().to_u64().ok_or_else(|| Error::CapExceeded("count overflow".into()))
}

/// Coefficients `[a_0, a_1, …]` of `z ↦ s_λ(prefix, z)`, where `prefix`
/// holds the first N−1 variables.
pub fn schur_last_variable(n: &PowerTuple, prefix: &[Q], cap: u64) -> Result<Vec<Q>> {
    let ints = n.ints().ok_or_else(|| Error::InvalidInput("tableau engine needs integral exponents".into()))?;
    if prefix.len() + 1 != ints.len() {
        return invalid("prefix must hold N-1 coordinates");
    }
    check_cap(&ints, cap)?;
    let lambda = shape(&ints);
    let total: u64 = lambda.iter().sum();
    let k = ints.len();
    let mut coeffs = vec![Q::zero(); total as usize + 1];
    let mut dp = Dp { u: prefix, memo: HashMap::new() };
    for nu in interlacing(&lambda, k) {
        let size: u64 = nu.iter().sum();
        let c = dp.eval(k - 1, &nu);
        coeffs[(total - size) as usize] += c;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn check_cap(ints: &[u64], cap: u64) -> Result<()> {
    let count = weyl_dimension_exact(ints);
    if count > Q::from_integer(cap.into()) {
        return Err(Error::CapExceeded(format!("{count} tableaux exceed the cap {cap}")));
    }
    Ok(())
}

struct Dp<'a> {
    u: &'a [Q],
    memo: HashMap<(usize, Vec<u64>), Q>,
}

impl Dp<'_> {
    /// `s_μ(u_1..u_k)`; zero when μ has more than k rows.
    fn eval(&mut self, k: usize, mu: &[u64]) -> Q {
        if mu.iter().skip(k).any(|&x| x > 0) {
            return Q::zero();
        }
        if k == 0 {
            return Q::one();
        }
        if let Some(v) = self.memo.get(&(k, mu.to_vec())) {
            return v.clone();
        }
        let size: u64 = mu.iter().sum();
        let mut total = Q::zero();
        for nu in interlacing(mu, k) {
            let d = size - nu.iter().sum::<u64>();
            let w = crate::rational::pow(&self.u[k - 1], d as u32);
            let s = self.eval(k - 1, &nu);
            if !s.is_zero() && !w.is_zero() {
                total += s * w;
            }
        }
        self.memo.insert((k, mu.to_vec()), total.clone());
        total
    }
}

/// Partitions ν with `μ_{i+1} ≤ ν_i ≤ μ_i` and at most `k − 1` rows.
fn interlacing(mu: &[u64], k: usize) -> Vec<Vec<u64>> {
    let len = mu.len();
    let mut out = Vec::new();
    let mut cur = vec![0u64; len];
    fn rec(i: usize, k: usize, mu: &[u64], cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 >= k {
            out.push(cur.clone());
            return;
        }
        let lo = mu.get(i + 1).copied().unwrap_or(0);
        for v in lo..=mu[i] {
            cur[i] = v;
            rec(i + 1, k, mu, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, k, mu, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    fn q(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| from_i64(x)).collect()
    }

    #[test]
    fn shape_of_zero_two_four_has_eight_tableaux() {
        let n = PowerTuple::from_ints(&[0, 2, 4]).unwrap();
        assert_eq!(schur_tableaux(&n, &q(&[1, 1, 1]), DEFAULT_TABLEAU_CAP).unwrap(), from_i64(8));
        assert_eq!(tableau_count(&n, DEFAULT_TABLEAU_CAP).unwrap(), 8);
    }

    #[test]
    fn factorized_value() {
        // (u1 + u2)(u2 + u3)(u3 + u1) at (1, 2, 3) = 3·5·4.
        let n = PowerTuple::from_ints(&[0, 2, 4]).unwrap();
        assert_eq!(schur_tableaux(&n, &q(&[1, 2, 3]), DEFAULT_TABLEAU_CAP).unwrap(), from_i64(60));
    }

    #[test]
    fn minimal_tuple_is_one() {
        let n = PowerTuple::minimal(4);
        assert_eq!(schur_tableaux(&n, &q(&[3, -1, 7, 2]), DEFAULT_TABLEAU_CAP).unwrap(), from_i64(1));
    }

    #[test]
    fn cap_is_enforced() {
        let n = PowerTuple::from_ints(&[0, 10, 20, 30]).unwrap();
        assert!(matches!(schur_tableaux(&n, &q(&[1, 1, 1, 1]), 100), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn last_variable_polynomial() {
        // s_{(0,2)}(1, z) = 1 + z.
        let n = PowerTuple::from_ints(&[0, 2]).unwrap();
        assert_eq!(schur_last_variable(&n, &q(&[1]), DEFAULT_TABLEAU_CAP).unwrap(), q(&[1, 1]));
        // s_{(0,1,3)}(1, 2, z) = 3 + z.
        let n = PowerTuple::from_ints(&[0, 1, 3]).unwrap();
        assert_eq!(schur_last_variable(&n, &q(&[1, 2]), DEFAULT_TABLEAU_CAP).unwrap(), q(&[3, 1]));
        // s_{(1,3)}(1, z) = z(1 + z).
        let n = PowerTuple::from_ints(&[1, 3]).unwrap();
        assert_eq!(schur_last_variable(&n, &q(&[1]), DEFAULT_TABLEAU_CAP).unwrap(), q(&[0, 1, 1]));
    }
}
