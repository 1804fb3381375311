//! Dense real and exact-rational matrices: spectra, determinants, minors,
//! total positivity, Hankel moment matrices, PSD sampling and the classical
//! condensation identities.

mod det;
mod eigen;
mod hankel;
mod identities;
mod sample;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::Q;

pub use det::{
    det_exact, det_lu, det_lu_log, lu_summary, LuSummary, is_strictly_tp, is_strictly_tp_exact, is_tn_brute, minor, minor_exact, tuple_sign,
    subsets, IndexTuple, TpReport, DEFAULT_TP_CAP,
};
pub use eigen::{is_psd, sym_eigen, PsdReport, Spectrum, DEFAULT_PSD_TOL};
pub use hankel::{hankel_build, hankel_truncate, is_tn_hankel, HankelMoments, TnReport};
pub use identities::{dodgson_residual, karlin_residual};
pub use sample::{sample_psd, sample_psd_signed};

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return invalid("ragged rows");
        }
        Ok(Matrix { rows: r, cols: c, data: rows.concat() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return invalid("dimension mismatch in product");
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        }))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Submatrix on 0-based row and column lists, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Open interval every entry of a matrix is asserted to lie in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryDomain {
    pub lo: f64,
    pub hi: f64,
}

/// Real symmetric matrix, stored exactly symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    inner: Matrix,
    domain: Option<EntryDomain>,
}

impl SymMatrix {
    /// Requires exact symmetry and finite entries.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return invalid("symmetric matrix must be square");
        }
        if !m.is_finite() {
            return invalid("non-finite entry");
        }
        for i in 0..m.rows {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return invalid(format!("asymmetric at ({i},{j})"));
                }
            }
        }
        Ok(SymMatrix { inner: m, domain: None })
    }

    /// Accepts asymmetry up to `rel_tol · max|a|`, then averages.
    pub fn symmetrized(m: Matrix, rel_tol: f64) -> Result<Self> {
        if !m.is_square() {
            return invalid("symmetric matrix must be square");
        }
        if !m.is_finite() {
            return invalid("non-finite entry");
        }
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        let n = m.rows;
        let mut out = m.clone();
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if (a - b).abs() > rel_tol * scale {
                    return invalid(format!("asymmetry {} at ({i},{j}) exceeds tolerance", (a - b).abs()));
                }
                let avg = 0.5 * (a + b);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Ok(SymMatrix { inner: out, domain: None })
    }

    /// Builds from the lower triangle of `f(i, j)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self::new(m)
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        if let Some(x) = self.inner.data.iter().find(|&&x| !(x > lo && x < hi)) {
            return Err(Error::InvalidInput(format!("entry {x} outside ({lo}, {hi})")));
        }
        self.domain = Some(EntryDomain { lo, hi });
        Ok(self)
    }

    pub fn domain(&self) -> Option<EntryDomain> {
        self.domain
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.inner[(i, i)]).sum()
    }

    /// Entrywise image; symmetry is preserved because `f` is applied to equal pairs.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        SymMatrix::new(self.inner.map(f))
    }

    /// Principal submatrix on 0-based indices.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix { inner: self.inner.select(idx, idx), domain: self.domain }
    }

    /// `u uᵀ`.
    pub fn outer(u: &[f64]) -> Result<Self> {
        Self::from_fn(u.len(), |i, j| u[i] * u[j])
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, ij: (usize, usize)) -> &f64 {
        &self.inner[ij]
    }
}

/// Exact rational matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return invalid("ragged rows");
        }
        Ok(RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| crate::rational::from_i64(x)).collect()).collect())
    }

    /// Exact image of a floating matrix.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let data = m.data.iter().map(|&x| crate::rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix { rows: m.rows, cols: m.cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn to_f64(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(crate::rational::to_f64).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

/// Reads a dense matrix from CSV text (one row per line, no header).
pub fn read_matrix_csv(text: &str) -> Result<Matrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad number {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Matrix::from_rows(&rows)
}

/// Reads a symmetric matrix from CSV text; see [`read_matrix_csv`].
pub fn read_sym_csv(text: &str) -> Result<SymMatrix> {
    SymMatrix::symmetrized(read_matrix_csv(text)?, 1e-12)
}

/// Reads a single CSV line of reals.
pub fn read_moments_csv(text: &str) -> Result<Vec<f64>> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() != 1 {
        return invalid("moment file must contain exactly one line");
    }
    lines[0]
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad number {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_symmetrizes_small_asymmetry() {
        let m = read_sym_csv("1, 2\n2.000000000000001, 3\n").unwrap();
        assert_eq!(m[(0, 1)], m[(1, 0)]);
        assert!(read_sym_csv("1,2\n2.1,3\n").is_err());
        assert!(read_sym_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn moments_single_line() {
        assert_eq!(read_moments_csv("1,0,1\n").unwrap(), vec![1.0, 0.0, 1.0]);
        assert!(read_moments_csv("1\n2\n").is_err());
    }

    #[test]
    fn domain_tag_is_checked() {
        let a = SymMatrix::outer(&[0.5, 0.9]).unwrap();
        assert!(a.clone().with_domain(0.0, 1.0).is_ok());
        assert!(a.with_domain(0.0, 0.5).is_err());
    }
}
