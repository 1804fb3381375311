use serde::{Deserialize, Serialize};

use super::{is_psd, Matrix, PsdReport, SymMatrix};
use crate::error::{invalid, Result};

/// Moments `s_0, …, s_{2N−2}` of an N×N Hankel matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelMoments {
    moments: Vec<f64>,
}

impl HankelMoments {
    pub fn new(moments: Vec<f64>) -> Result<Self> {
        if moments.len() % 2 == 0 {
            return invalid(format!("moment count {} is not of the form 2N-1", moments.len()));
        }
        if moments.iter().any(|x| !x.is_finite()) {
            return invalid("non-finite moment");
        }
        Ok(HankelMoments { moments })
    }

    pub fn dim(&self) -> usize {
        (self.moments.len() + 1) / 2
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }
}

/// `A[i][j] = s_{i+j}` (0-based).
pub fn hankel_build(m: &HankelMoments) -> SymMatrix {
    let n = m.dim();
    SymMatrix::from_fn(n, |i, j| m.moments[i + j]).expect("Hankel matrices are symmetric")
}

/// Drops the first column and the last row; for a Hankel matrix this is
/// again Hankel, with entries `s_{i+j+1}`.
pub fn hankel_truncate(a: &SymMatrix) -> Matrix {
    let n = a.n();
    let k = n.saturating_sub(1);
    Matrix::from_fn(k, k, |i, j| a[(i, j + 1)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TnReport {
    pub is_tn: bool,
    pub matrix: PsdReport,
    /// `None` when N = 1 and the truncation is empty.
    pub truncation: Option<PsdReport>,
}

/// A Hankel matrix is totally non-negative iff it and its truncation are PSD.
pub fn is_tn_hankel(m: &HankelMoments, tol: f64) -> Result<TnReport> {
    let a = hankel_build(m);
    let ra = is_psd(&a, tol)?;
    let t = hankel_truncate(&a);
    let rt = if t.rows() == 0 { None } else { Some(is_psd(&SymMatrix::new(t)?, tol)?) };
    Ok(TnReport { is_tn: ra.is_psd && rt.is_none_or(|r| r.is_psd), matrix: ra, truncation: rt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_tn_brute;
    use crate::rng::generator;
    use rand::Rng;

    fn hm(v: &[f64]) -> HankelMoments {
        HankelMoments::new(v.to_vec()).unwrap()
    }

    #[test]
    fn build_and_truncate() {
        let a = hankel_build(&hm(&[1.0, 1.0, 1.0]));
        assert_eq!(a.matrix().to_rows(), vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(hankel_truncate(&a).to_rows(), vec![vec![1.0]]);
        let a = hankel_build(&hm(&[1.0, 0.0, 1.0]));
        assert_eq!(a.matrix().to_rows(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(hankel_truncate(&a).to_rows(), vec![vec![0.0]]);
        assert_eq!(hankel_build(&hm(&[1.0, 2.0, 1.0])).matrix().to_rows(), vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(HankelMoments::new(vec![1.0, 2.0]).is_err());
        let a = hankel_build(&hm(&[0.0, 1.0, 2.0, 3.0, 4.0]));
        let t = hankel_truncate(&a);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t[(i, j)], (i + j + 1) as f64);
            }
        }
    }

    #[test]
    fn tn_examples() {
        assert!(is_tn_hankel(&hm(&[1.0, 1.0, 1.0]), 1e-9).unwrap().is_tn);
        assert!(!is_tn_hankel(&hm(&[1.0, 2.0, 1.0]), 1e-9).unwrap().is_tn);
        assert!(is_tn_hankel(&hm(&[1.0, 0.0, 1.0]), 1e-9).unwrap().is_tn);
        assert!(!is_tn_hankel(&hm(&[1.0, -0.5, 1.0]), 1e-9).unwrap().is_tn);
        assert!(is_tn_hankel(&hm(&[2.0]), 1e-9).unwrap().is_tn);
    }

    /// Moments of a random atomic measure on `[0, ∞)` (always TN), or raw
    /// random moments (usually not).
    pub(crate) fn random_moments(rng: &mut crate::rng::Generator, n: usize) -> Vec<f64> {
        if rng.random_bool(0.5) {
            let atoms = rng.random_range(1..=n + 1);
            let pts: Vec<(f64, f64)> = (0..atoms).map(|_| (rng.random_range(0.0..2.0), rng.random_range(0.1..1.0))).collect();
            (0..2 * n - 1).map(|k| pts.iter().map(|(x, w)| w * x.powi(k as i32)).sum()).collect()
        } else {
            (0..2 * n - 1).map(|_| rng.random_range(-0.5..2.0)).collect()
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = generator(2024);
        for _ in 0..1000 {
            let n = rng.random_range(1..=4);
            let m = hm(&random_moments(&mut rng, n));
            let fast = is_tn_hankel(&m, 1e-9).unwrap().is_tn;
            let brute = is_tn_brute(hankel_build(&m).matrix(), 1e-9);
            assert_eq!(fast, brute, "moments {:?}", m.moments());
        }
    }
}
