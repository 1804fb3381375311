use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Strictly increasing non-negative exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTuple {
    exps: Vec<f64>,
    integral: bool,
}

impl PowerTuple {
    pub fn new(exps: Vec<f64>) -> Result<Self> {
        if exps.is_empty() {
            return invalid("power tuple must be non-empty");
        }
        if exps.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return invalid("exponents must be finite and non-negative");
        }
        if exps.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("exponents {exps:?} are not strictly increasing"));
        }
        let integral = exps.iter().all(|e| e.fract() == 0.0 && *e < 9.0e15);
        Ok(PowerTuple { exps, integral })
    }

    pub fn from_ints(exps: &[u64]) -> Result<Self> {
        Self::new(exps.iter().map(|&e| e as f64).collect())
    }

    /// `(0, 1, …, N−1)`.
    pub fn minimal(n: usize) -> Self {
        PowerTuple { exps: (0..n).map(|i| i as f64).collect(), integral: true }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[f64] {
        &self.exps
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn ints(&self) -> Option<Vec<u64>> {
        self.integral.then(|| self.exps.iter().map(|&e| e as u64).collect())
    }

    pub fn last(&self) -> f64 {
        *self.exps.last().unwrap()
    }

    pub fn is_minimal(&self) -> bool {
        self.exps.iter().enumerate().all(|(i, &e)| e == i as f64)
    }

    /// Consecutive gaps all at least 1.
    pub fn is_one_separated(&self) -> bool {
        self.exps.windows(2).all(|w| w[1] - w[0] >= 1.0)
    }

    /// Drop entry `j` and append `m > last`.
    pub fn replaced(&self, j: usize, m: f64) -> Result<Self> {
        if !(m > self.last()) {
            return invalid(format!("appended exponent {m} must exceed {}", self.last()));
        }
        let mut e: Vec<f64> = self.exps.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
        e.push(m);
        Self::new(e)
    }

    /// Each exponent lies in ℤ≥0 ∪ [N−2, ∞).
    pub fn is_full_rank_feasible(&self) -> bool {
        let n = self.len() as f64;
        self.exps.iter().all(|&e| e.fract() == 0.0 || e >= n - 2.0)
    }

    /// Of the form `(0, 1, …, N−2, N−1+2r)`; returns `r`.
    pub fn two_sided_degree(&self) -> Option<u64> {
        let n = self.len();
        if !self.exps[..n - 1].iter().enumerate().all(|(i, &e)| e == i as f64) {
            return None;
        }
        let extra = self.last() - (n - 1) as f64;
        (extra >= 0.0 && extra.fract() == 0.0 && (extra as u64) % 2 == 0).then_some(extra as u64 / 2)
    }
}

/// Strictly positive coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositiveVector {
    coords: Vec<f64>,
    sorted: bool,
}

impl PositiveVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return invalid("vector must be non-empty");
        }
        if coords.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return invalid("coordinates must be positive and finite");
        }
        let sorted = coords.windows(2).all(|w| w[0] <= w[1]);
        Ok(PositiveVector { coords, sorted })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `(1, ε, …, ε^{N−1})`.
    pub fn geometric(n: usize, eps: f64) -> Result<Self> {
        Self::new((0..n).map(|i| eps.powi(i as i32)).collect())
    }
}
