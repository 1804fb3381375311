use super::{det_exact, RationalMatrix};
use crate::error::{invalid, Result};
use crate::rational::Q;

/// Desnanot–Jacobi condensation residual for rows `i1 < i2`, columns
/// `j1 < j2` (1-based). Zero for every square matrix.
pub fn dodgson_residual(a: &RationalMatrix, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<Q> {
    let n = a.rows();
    if n < 2 || a.cols() != n {
        return invalid("condensation needs a square matrix of size at least 2");
    }
    if !(1 <= i1 && i1 < i2 && i2 <= n && 1 <= j1 && j1 < j2 && j2 <= n) {
        return invalid("indices must satisfy 1 <= i1 < i2 <= n and 1 <= j1 < j2 <= n");
    }
    let without = |skip: &[usize]| -> Vec<usize> { (0..n).filter(|k| !skip.contains(&(k + 1))).collect() };
    let d = |rs: &[usize], cs: &[usize]| det_exact(&a.select(&without(rs), &without(cs)));
    let lhs = det_exact(a)? * d(&[i1, i2], &[j1, j2])?;
    let rhs = d(&[i1], &[j1])? * d(&[i2], &[j2])? - d(&[i1], &[j2])? * d(&[i2], &[j1])?;
    Ok(lhs - rhs)
}

/// Karlin's three-term residual for columns `x1, x2, y1, y2` and an
/// n×(n−2) block `b`. Zero for all inputs.
pub fn karlin_residual(x1: &[Q], x2: &[Q], y1: &[Q], y2: &[Q], b: &RationalMatrix) -> Result<Q> {
    let n = x1.len();
    if n < 2 || [x2.len(), y1.len(), y2.len()].iter().any(|&l| l != n) {
        return invalid("column vectors must share a length of at least 2");
    }
    if n > 2 && (b.rows() != n || b.cols() != n - 2) {
        return invalid(format!("block must be {}x{}", n, n - 2));
    }
    let det = |p: &[Q], q: &[Q]| {
        det_exact(&RationalMatrix::from_fn(n, n, |i, j| match j {
            0 => p[i].clone(),
            1 => q[i].clone(),
            _ => b[(i, j - 2)].clone(),
        }))
    };
    Ok(det(x1, y1)? * det(x2, y2)? - det(x1, y2)? * det(x2, y1)? - det(x1, x2)? * det(y1, y2)?)
}
