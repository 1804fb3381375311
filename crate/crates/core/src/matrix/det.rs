use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Matrix, RationalMatrix};
use crate::error::{invalid, Error, Result};
use crate::rational::Q;

pub const DEFAULT_TP_CAP: usize = 7;

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_lu(a: &Matrix) -> f64 {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs())).unwrap();
        if m[(p, k)] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = t;
            }
            det = -det;
        }
        let piv = m[(k, k)];
        det *= piv;
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    m[(i, j)] -= f * m[(k, j)];
                }
            }
        }
    }
    det
}

/// `(sign, ln|det|)`; rows are equilibrated first so graded matrices keep
/// their relative accuracy and huge determinants do not overflow.
pub fn det_lu_log(a: &Matrix) -> (i32, f64) {
    let s = lu_summary(a);
    (s.sign, s.log_abs)
}

/// Sign, log-magnitude and pivot spread of an equilibrated LU factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuSummary {
    pub sign: i32,
    pub log_abs: f64,
    /// Largest over smallest pivot magnitude; infinite when singular.
    pub pivot_ratio: f64,
}

pub fn lu_summary(a: &Matrix) -> LuSummary {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    let singular = LuSummary { sign: 0, log_abs: f64::NEG_INFINITY, pivot_ratio: f64::INFINITY };
    if n == 0 {
        return LuSummary { sign: 1, log_abs: 0.0, pivot_ratio: 1.0 };
    }
    let (mut pmin, mut pmax) = (f64::INFINITY, 0.0f64);
    let mut m = a.clone();
    let mut sign = 1;
    let mut log = 0.0;
    for i in 0..n {
        let s = m.row(i).iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if s == 0.0 {
            return singular;
        }
        for j in 0..n {
            m[(i, j)] /= s;
        }
        log += s.ln();
    }
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs())).unwrap();
        if m[(p, k)] == 0.0 {
            return singular;
        }
        if p != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = t;
            }
            sign = -sign;
        }
        let piv = m[(k, k)];
        if piv < 0.0 {
            sign = -sign;
        }
        log += piv.abs().ln();
        pmin = pmin.min(piv.abs());
        pmax = pmax.max(piv.abs());
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    m[(i, j)] -= f * m[(k, j)];
                }
            }
        }
    }
    LuSummary { sign, log_abs: log, pivot_ratio: pmax / pmin }
}

/// Fraction-free (Bareiss) determinant. Rows are cleared of denominators
/// first, so the elimination runs over integers.
pub fn det_exact(a: &RationalMatrix) -> Result<Q> {
    if a.rows() != a.cols() {
        return invalid("determinant of a non-square matrix");
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Q::one());
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = (0..n).fold(BigInt::one(), |acc, j| acc.lcm(a[(i, j)].denom()));
        m.push((0..n).map(|j| (&a[(i, j)] * Q::from_integer(l.clone())).to_integer()).collect());
        scale *= l;
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(Q::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone() * sign;
    Ok(Q::new(d, scale))
}

/// Distinct 1-based indices in `[1, n]`, kept in the given order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return invalid("index tuple must be non-empty");
        }
        for (k, &i) in indices.iter().enumerate() {
            if i == 0 || i > n {
                return invalid(format!("index {i} outside [1, {n}]"));
            }
            if indices[..k].contains(&i) {
                return invalid(format!("repeated index {i}"));
            }
        }
        Ok(IndexTuple(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }
}

/// (−1)^{#inversions}.
pub fn tuple_sign(t: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i] > t[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `A_{I,J}` with rows and columns in the tuples' order.
pub fn minor(a: &Matrix, i: &IndexTuple, j: &IndexTuple) -> Result<Matrix> {
    check_minor(a.rows(), a.cols(), i, j)?;
    Ok(a.select(&i.zero_based(), &j.zero_based()))
}

pub fn minor_exact(a: &RationalMatrix, i: &IndexTuple, j: &IndexTuple) -> Result<RationalMatrix> {
    check_minor(a.rows(), a.cols(), i, j)?;
    Ok(a.select(&i.zero_based(), &j.zero_based()))
}

fn check_minor(rows: usize, cols: usize, i: &IndexTuple, j: &IndexTuple) -> Result<()> {
    if i.len() != j.len() {
        return invalid("row and column tuples differ in length");
    }
    if i.0.iter().any(|&x| x > rows) || j.0.iter().any(|&x| x > cols) {
        return invalid("index out of range");
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TpReport {
    pub strictly_tp: bool,
    pub minors_checked: usize,
    /// First non-positive minor (1-based increasing tuples), if any.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// All k-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn tp_scan(n: usize, cap: usize, mut positive: impl FnMut(&[usize], &[usize]) -> bool) -> Result<TpReport> {
    if n > cap {
        return Err(Error::CapExceeded(format!("dimension {n} above strict-TP cap {cap}")));
    }
    let mut checked = 0;
    for k in 1..=n {
        let subs = subsets(n, k);
        for r in &subs {
            for c in &subs {
                checked += 1;
                if !positive(r, c) {
                    let one = |v: &[usize]| v.iter().map(|x| x + 1).collect();
                    return Ok(TpReport { strictly_tp: false, minors_checked: checked, witness: Some((one(r), one(c))) });
                }
            }
        }
    }
    Ok(TpReport { strictly_tp: true, minors_checked: checked, witness: None })
}

/// Every minor on increasing tuples is `> 0`.
pub fn is_strictly_tp(a: &Matrix, cap: usize) -> Result<TpReport> {
    if !a.is_square() {
        return invalid("strict TP test needs a square matrix");
    }
    tp_scan(a.rows(), cap, |r, c| det_lu(&a.select(r, c)) > 0.0)
}

pub fn is_strictly_tp_exact(a: &RationalMatrix, cap: usize) -> Result<TpReport> {
    if a.rows() != a.cols() {
        return invalid("strict TP test needs a square matrix");
    }
    tp_scan(a.rows(), cap, |r, c| det_exact(&a.select(r, c)).map(|d| d.is_positive()).unwrap_or(false))
}

/// Brute-force total non-negativity: every minor `≥ −tol·scale`, where
/// scale is the largest `|a|^k` over minor sizes `k`.
pub fn is_tn_brute(a: &Matrix, tol: f64) -> bool {
    let (r, c) = (a.rows(), a.cols());
    let base = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 1..=r.min(c) {
        let scale = base.powi(k as i32);
        let rs = subsets(r, k);
        let cs = subsets(c, k);
        for ri in &rs {
            for ci in &cs {
                if det_lu(&a.select(ri, ci)) < -tol * scale {
                    return false;
                }
            }
        }
    }
    true
}
