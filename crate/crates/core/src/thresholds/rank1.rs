use super::{check_common, inputs, CoefficientTuple, Formula, ThresholdReport};
use crate::error::{invalid, Error, Result};
use crate::matrix::{sym_eigen, Matrix, SymMatrix};
use crate::rational::{self, Q};
use crate::symfun::{gen_vdm_det, gen_vdm_det_exact, pow_f, PositiveVector, PowerTuple, DEFAULT_DISTINCT_GAP, EXACT_EXPONENT_CAP};

/// Eigenvalues of `h[A]` below this fraction of the largest are kernel.
pub const PINV_CUTOFF: f64 = 1e-10;

/// Threshold for `A = u uᵀ`: `Σ_j (det u^{∘n_j})² / (c_j (det u^{∘n})²)`.
/// Integral exponents go through exact arithmetic.
pub fn rank1_threshold_at(u: &PositiveVector, n: &PowerTuple, c: &CoefficientTuple, m: f64) -> Result<ThresholdReport> {
    check_common(n, c, m, 1.0)?;
    if u.len() != n.len() {
        return invalid(format!("|u| = {} but |n| = {}", u.len(), n.len()));
    }
    let x = u.coords();
    let scale = x.iter().fold(0.0f64, |a, &b| a.max(b));
    for j in 0..x.len() {
        for i in 0..j {
            if (x[i] - x[j]).abs() <= DEFAULT_DISTINCT_GAP * scale {
                return Err(Error::DegenerateInput(format!("coordinates {} and {} coincide", x[i], x[j])));
            }
        }
    }
    let len = n.len();
    let cv = c.values();
    let exact_ok = n.is_integral() && m.fract() == 0.0 && m <= EXACT_EXPONENT_CAP as f64;
    let value = if exact_ok {
        let uq = x.iter().map(|&v| rational::from_f64(v)).collect::<Result<Vec<Q>>>()?;
        let ints = n.ints().unwrap();
        let base = gen_vdm_det_exact(&uq, &ints)?;
        let base_sq = &base * &base;
        let mut total = 0.0;
        for j in 0..len {
            let nj: Vec<u64> = ints.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &e)| e).chain([m as u64]).collect();
            let d = gen_vdm_det_exact(&uq, &nj)?;
            total += rational::to_f64(&(&d * &d / &base_sq)) / cv[j];
        }
        total
    } else {
        let base = gen_vdm_det(x, n)?;
        let mut total = 0.0;
        for j in 0..len {
            let d = gen_vdm_det(x, &n.replaced(j, m)?)?;
            total += (2.0 * (d.log_abs - base.log_abs)).exp() / cv[j];
        }
        total
    };
    let mut inp = inputs(n, c, m, f64::NAN);
    inp.rho = None;
    let mut r = ThresholdReport::new(value, Formula::Rank1At, inp)?;
    r.witness = Some(x.to_vec());
    Ok(r)
}

fn hadamard_power(a: &SymMatrix, e: f64) -> Result<SymMatrix> {
    if e.fract() != 0.0 && a.matrix().data().iter().any(|&x| x < 0.0) {
        return Err(Error::DomainError("negative entry raised to a non-integral power".into()));
    }
    a.map(|x| pow_f(x, e))
}

/// Smallest `t` with `t·h[A] − A^{∘M}` PSD, where `h = Σ c_j x^{n_j}`:
/// the spectral radius of `h[A]^{†/2} A^{∘M} h[A]^{†/2}`.
pub fn rayleigh_threshold(a: &SymMatrix, n: &PowerTuple, c: &CoefficientTuple, m: f64) -> Result<ThresholdReport> {
    check_common(n, c, m, 1.0)?;
    if a.n() != n.len() {
        return invalid(format!("matrix is {0}x{0} but |n| = {1}", a.n(), n.len()));
    }
    let spec_a = sym_eigen(a)?;
    if spec_a.min() < -1e-9 * spec_a.max().max(1.0) {
        return invalid("matrix is not positive semidefinite");
    }
    let rank = spec_a.eigenvalues.iter().filter(|&&l| l > 1e-8 * spec_a.max()).count();
    if rank > 1 && !n.is_full_rank_feasible() {
        return invalid("exponents outside Z>=0 and [N-2, inf) need a rank-one matrix");
    }
    let len = a.n();
    let mut h = Matrix::zeros(len, len);
    for (&e, &cj) in n.exps().iter().zip(c.values()) {
        let p = hadamard_power(a, e)?;
        for i in 0..len {
            for j in 0..len {
                h[(i, j)] += cj * p[(i, j)];
            }
        }
    }
    let h = SymMatrix::new(h)?;
    let sh = sym_eigen(&h)?;
    let cut = PINV_CUTOFF * sh.max();
    let inv_sqrt: Vec<f64> = sh.eigenvalues.iter().map(|&l| if l > cut { 1.0 / l.sqrt() } else { 0.0 }).collect();
    let p = Matrix::from_fn(len, len, |i, j| (0..len).map(|k| sh.eigenvectors[(i, k)] * inv_sqrt[k] * sh.eigenvectors[(j, k)]).sum());
    let am = hadamard_power(a, m)?;
    let b = p.mul(am.matrix())?.mul(&p)?;
    let b = SymMatrix::symmetrized(b, 1e-6)?;
    let sb = sym_eigen(&b)?;
    let mut inp = inputs(n, c, m, f64::NAN);
    inp.rho = None;
    inp.extras.push(("rank".into(), rank as f64));
    let mut r = ThresholdReport::new(sb.max(), Formula::Rayleigh, inp)?;
    r.witness = Some(p.mul_vec(&sb.vector(len - 1)));
    Ok(r)
}
