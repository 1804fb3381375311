use num_traits::{Signed, Zero};
use rand::Rng;

use super::*;
use crate::matrix::{dodgson_residual, karlin_residual};
use crate::rational::{from_i64, pow};
use crate::rng::Generator;

fn it(v: &[usize], n: usize) -> IndexTuple {
    IndexTuple::new(v.to_vec(), n).unwrap()
}

fn distinct_tuple(rng: &mut Generator, len: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    loop {
        let mut t: Vec<f64> = (0..len).map(|_| rng.random_range(lo..hi)).collect();
        t.sort_by(f64::total_cmp);
        if t.windows(2).all(|w| w[1] - w[0] >= gap) {
            return t;
        }
    }
}

/// Largest deficit of `m`'s top-k sums against `n`'s.
fn prefix_deficit(m: &[f64], n: &[f64]) -> f64 {
    let (dm, dn) = (decreasing(m), decreasing(n));
    let (mut sm, mut sn, mut worst) = (0.0, 0.0, f64::NEG_INFINITY);
    for k in 0..dm.len() {
        sm += dm[k];
        sn += dn[k];
        worst = worst.max(sn - sm);
    }
    worst
}

#[test]
fn majorization_examples() {
    assert_eq!(weak_majorize(&[3.0, 1.0], &[2.0, 1.0]).unwrap(), Majorization::WeaklyMajorizes);
    assert_eq!(weak_majorize(&[2.0, 0.0], &[1.0, 1.0]).unwrap(), Majorization::Majorizes);
    assert_eq!(weak_majorize(&[1.0, 1.0], &[2.0, 0.0]).unwrap(), Majorization::Neither);
    assert_eq!(weak_majorize(&[0.1, 0.2], &[0.3, 0.0]).unwrap(), Majorization::Neither);
    assert_eq!(weak_majorize(&[0.2, 0.1], &[0.15, 0.15]).unwrap(), Majorization::Majorizes);
    assert!(weak_majorize(&[1.0], &[1.0, 2.0]).is_err());
    let q = |v: &[i64]| v.iter().map(|&x| from_i64(x)).collect::<Vec<_>>();
    assert_eq!(weak_majorize_exact(&q(&[2, 0]), &q(&[1, 1])).unwrap(), Majorization::Majorizes);
    assert_eq!(weak_majorize_exact(&q(&[3, 1]), &q(&[2, 1])).unwrap(), Majorization::WeaklyMajorizes);
    assert_eq!(weak_majorize_exact(&q(&[1, 1]), &q(&[2, 0])).unwrap(), Majorization::Neither);
}

#[test]
fn majorization_agrees_with_exact_on_dyadics() {
    let mut rng = crate::rng::generator(30);
    for _ in 0..2000 {
        let len = rng.random_range(1..=5);
        let m: Vec<i64> = (0..len).map(|_| rng.random_range(0..8)).collect();
        let n: Vec<i64> = (0..len).map(|_| rng.random_range(0..8)).collect();
        let f = |v: &[i64]| v.iter().map(|&x| x as f64 / 4.0).collect::<Vec<_>>();
        let q = |v: &[i64]| v.iter().map(|&x| Q::new(x.into(), 4.into())).collect::<Vec<_>>();
        assert_eq!(weak_majorize(&f(&m), &f(&n)).unwrap(), weak_majorize_exact(&q(&m), &q(&n)).unwrap());
    }
}

#[test]
fn cgs_examples() {
    let r = cgs_check(&[0.0, 3.0], &[1.0, 2.0], &[1.0, 2.0]).unwrap();
    assert!(r.holds);
    assert!((r.log_lhs.exp() - 7.0 / 3.0).abs() < 1e-14 && (r.log_rhs.exp() - 2.0).abs() < 1e-14);
    let eq = cgs_check(&[0.5, 1.7, 2.2], &[0.5, 1.7, 2.2], &[1.3, 2.0, 4.5]).unwrap();
    assert!(eq.holds && eq.log_lhs == eq.log_rhs);
    assert!(matches!(cgs_check(&[0.0, 0.0], &[1.0, 2.0], &[1.0, 2.0]), Err(Error::DegenerateInput(_))));
    assert!(matches!(cgs_check(&[0.0, 1.0], &[1.0, 2.0], &[2.0, 2.0]), Err(Error::DegenerateInput(_))));
    assert!(cgs_check(&[0.0, 1.0], &[1.0, 2.0], &[0.5, 2.0]).is_err());
    match cgs_converse_search(&[0.0, 1.0], &[0.0, 3.0], DEFAULT_BUDGET, 1).unwrap() {
        ConverseOutcome::Violation { report, .. } => assert!(report.log_lhs < report.log_rhs),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        cgs_converse_search(&[0.0, 3.0], &[1.0, 2.0], 200, 1).unwrap(),
        ConverseOutcome::Inconclusive { probes: 200 }
    ));
}

#[test]
fn cgs_forward_and_converse_sweeps() {
    let mut rng = crate::rng::generator(31);
    let (mut forward, mut converse) = (0, 0);
    while forward < 30 || converse < 30 {
        let len = rng.random_range(1..=4);
        let m = distinct_tuple(&mut rng, len, 0.0, 5.0, 0.05);
        let n = distinct_tuple(&mut rng, len, 0.0, 5.0, 0.05);
        match weak_majorize(&m, &n).unwrap() {
            Majorization::Neither if converse < 30 && prefix_deficit(&m, &n) >= 0.25 => {
                converse += 1;
                let out = cgs_converse_search(&m, &n, DEFAULT_BUDGET, converse).unwrap();
                assert!(matches!(out, ConverseOutcome::Violation { .. }), "{m:?} {n:?}");
            }
            Majorization::Majorizes | Majorization::WeaklyMajorizes if forward < 30 => {
                forward += 1;
                for _ in 0..20 {
                    let u = distinct_tuple(&mut rng, len, 1.0, 10.0, 0.05);
                    assert!(cgs_check(&m, &n, &u).unwrap().holds, "{m:?} {n:?} {u:?}");
                }
            }
            _ => {}
        }
    }
}

#[test]
fn ratio_examples() {
    let n = PowerTuple::new(vec![0.0, 1.0]).unwrap();
    let u = PositiveVector::new(vec![0.5, 1.5]).unwrap();
    let same = ratio_monotone_check(&n, &n, &u, 0, 0.3).unwrap();
    assert!(same.holds && same.before == 1.0 && same.after == 1.0);
    let m = PowerTuple::new(vec![0.0, 2.0]).unwrap();
    let r = ratio_monotone_check(&m, &n, &u, 0, 0.25).unwrap();
    assert!(r.holds);
    assert!((r.before - 2.0).abs() < 1e-14 && (r.after - 2.25).abs() < 1e-14);
    let back = ratio_monotone_check(&m, &n, &u, 1, -0.5).unwrap();
    assert!(back.holds && back.after < back.before);
    assert!(matches!(ratio_monotone_check(&n, &m, &u, 0, 0.1), Err(Error::PreconditionViolated(_))));
}

#[test]
fn ratio_sweep() {
    let mut rng = crate::rng::generator(32);
    let mut done = 0;
    while done < 1000 {
        let len = rng.random_range(1..=4);
        let n = distinct_tuple(&mut rng, len, 0.0, 4.0, 0.1);
        let m: Vec<f64> = n.iter().enumerate().map(|(k, &x)| x + rng.random_range(0.0..1.0) + 0.01 * k as f64).collect();
        let Ok(mt) = PowerTuple::new(m.clone()) else { continue };
        let nt = PowerTuple::new(n.clone()).unwrap();
        let u = distinct_tuple(&mut rng, len, 0.1, 3.0, 0.05);
        let j = rng.random_range(0..len);
        let h = rng.random_range(0.01..0.5);
        let mut moved = u.clone();
        moved[j] += h;
        let mut s = moved.clone();
        s.sort_by(f64::total_cmp);
        if s.windows(2).any(|w| w[1] - w[0] < 0.02) {
            continue;
        }
        let r = ratio_monotone_check(&mt, &nt, &PositiveVector::new(u.clone()).unwrap(), j, h).unwrap();
        assert!(r.holds, "m={m:?} n={n:?} u={u:?} j={j} h={h}: {r:?}");
        done += 1;
    }
}

#[test]
fn meet_join_examples() {
    assert!(IndexTuple::new(vec![2, 2], 3).is_err());
    let (meet, join) = tuple_meet_join(&it(&[1, 4], 4), &it(&[2, 3], 4)).unwrap();
    assert_eq!((meet.indices(), join.indices()), (&[1, 3][..], &[2, 4][..]));
    let a = it(&[3, 1, 2], 3);
    let (m, j) = tuple_meet_join(&a, &a).unwrap();
    assert_eq!((&m, &j), (&a, &a));
    assert!(matches!(tuple_meet_join(&it(&[1, 2], 3), &it(&[3, 1], 3)), Err(Error::PreconditionViolated(_))));
    let (m, j) = tuple_meet_join(&it(&[5, 1, 3], 6), &it(&[6, 2, 4], 6)).unwrap();
    assert_eq!((m.indices(), j.indices()), (&[5, 1, 3][..], &[6, 2, 4][..]));
}

#[test]
fn logsup_examples() {
    let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let r = logsup_check(&a, &it(&[1], 2), &it(&[2], 2), &it(&[2], 2), &it(&[1], 2)).unwrap();
    assert_eq!(r.residual, 1.0);
    let not_tp = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(logsup_check(&not_tp, &it(&[1], 2), &it(&[2], 2), &it(&[1], 2), &it(&[2], 2)).is_err());
}

fn gv_matrix(rng: &mut Generator, n: usize) -> Matrix {
    let x = distinct_tuple(rng, n, 0.2, 3.0, 0.1);
    let y = distinct_tuple(rng, n, 0.0, 4.0, 0.1);
    Matrix::from_fn(n, n, |i, j| x[i].powf(y[j]))
}

/// Two index tuples of length `k` in `[1, n]` sharing a random ordering.
fn same_ordering_pair(rng: &mut Generator, n: usize, k: usize) -> (IndexTuple, IndexTuple) {
    let pick = |rng: &mut Generator| {
        let mut s: Vec<usize> = (1..=n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            s.swap(i, j);
        }
        let mut t = s[..k].to_vec();
        t.sort();
        t
    };
    let (a, b) = (pick(rng), pick(rng));
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let apply = |t: &[usize]| IndexTuple::new(perm.iter().map(|&p| t[p]).collect(), n).unwrap();
    (apply(&a), apply(&b))
}

#[test]
fn logsup_sweep_and_comparable_pairs() {
    let mut rng = crate::rng::generator(33);
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(1..=n.min(3));
        let a = gv_matrix(&mut rng, n);
        let (i1, i2) = same_ordering_pair(&mut rng, n, k);
        let (j1, j2) = same_ordering_pair(&mut rng, n, k);
        let r = logsup_residual(&a, &i1, &i2, &j1, &j2).unwrap();
        assert!(r.holds(1e-10), "{r:?}");
        let (im, ij) = tuple_meet_join(&i1, &i2).unwrap();
        let (jm, jj) = tuple_meet_join(&j1, &j2).unwrap();
        assert_eq!(logsup_residual(&a, &im, &ij, &jm, &jj).unwrap().residual, 0.0);
    }
}

#[test]
fn logsup_exact_on_integer_vandermonde() {
    let mut rng = crate::rng::generator(34);
    for _ in 0..300 {
        let n = rng.random_range(1..=5);
        let k = rng.random_range(1..=n.min(3));
        let mut x: Vec<i64> = Vec::new();
        while x.len() < n {
            let v = rng.random_range(1..12);
            if !x.contains(&v) {
                x.push(v);
            }
        }
        x.sort();
        let mut y: Vec<u32> = Vec::new();
        while y.len() < n {
            let v = rng.random_range(0..8);
            if !y.contains(&v) {
                y.push(v);
            }
        }
        y.sort();
        let a = RationalMatrix::from_fn(n, n, |i, j| pow(&from_i64(x[i]), y[j]));
        let (i1, i2) = same_ordering_pair(&mut rng, n, k);
        let (j1, j2) = same_ordering_pair(&mut rng, n, k);
        assert!(!logsup_residual_exact(&a, &i1, &i2, &j1, &j2).unwrap().is_negative());
    }
}

fn q(rng: &mut Generator) -> Q {
    Q::new(rng.random_range(-20..=20).into(), rng.random_range(1..=9).into())
}

fn q_matrix(rng: &mut Generator, rows: usize, cols: usize) -> RationalMatrix {
    RationalMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| q(rng)).collect()).collect()).unwrap()
}

#[test]
fn condensation_identities_on_rational_matrices() {
    let mut rng = crate::rng::generator(35);
    for _ in 0..300 {
        let n = rng.random_range(2..=5);
        let a = q_matrix(&mut rng, n, n);
        let i1 = rng.random_range(1..n);
        let i2 = rng.random_range(i1 + 1..=n);
        let j1 = rng.random_range(1..n);
        let j2 = rng.random_range(j1 + 1..=n);
        assert!(dodgson_residual(&a, i1, i2, j1, j2).unwrap().is_zero());
        let cols: Vec<Vec<Q>> = (0..4).map(|_| (0..n).map(|_| q(&mut rng)).collect()).collect();
        let b = q_matrix(&mut rng, n, n - 2);
        assert!(karlin_residual(&cols[0], &cols[1], &cols[2], &cols[3], &b).unwrap().is_zero());
    }
}
