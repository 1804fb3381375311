//! Acceptance run: one line per criterion with its verdict and wall time.
//! Exits non-zero when any criterion fails or overruns its time budget.

use std::time::{Duration, Instant};

use clap::Parser;
use num_traits::{Signed, Zero};
use rand::Rng;

use preserver_core::hciz::{hciz_exact, hciz_mc};
use preserver_core::matrix::{
    dodgson_residual, hankel_build, is_tn_brute, is_tn_hankel, karlin_residual, det_exact, HankelMoments, IndexTuple, RationalMatrix,
    SymMatrix,
};
use preserver_core::order::{cgs_check, cgs_converse_search, logsup_residual_exact, weak_majorize, ConverseOutcome, Majorization};
use preserver_core::preserver::{
    cauchy_binet_det, certify_preserver, complex_counterexample, entrywise_rank_one_exact, two_sided_witness, CertConfig,
    ComplexOutcome, Domain, PowerSum, Verdict,
};
use preserver_core::rational::{self, Q};
use preserver_core::rng::{generator, Generator};
use preserver_core::symfun::{monomial_bounds, schur_bialternant, schur_tableaux, weyl_dimension, PositiveVector, PowerTuple, DEFAULT_TABLEAU_CAP};
use preserver_core::thresholds::{
    cube_asymptotic_scan, qualitative_k, rank1_threshold_at, rayleigh_threshold, sharp_c, CoefficientTuple, KVariant, TupleFamily,
};
use preserver_lab::{dispatch, Cli, Report};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lab(args: &[&str]) -> Result<Report, String> {
    let cli = Cli::try_parse_from(std::iter::once("preserver-lab").chain(args.iter().copied())).map_err(|e| e.to_string())?;
    dispatch(&cli).map_err(|e| e.to_string())
}

fn distinct_ints(rng: &mut Generator, len: usize, lo: u64, hi: u64) -> Vec<u64> {
    let mut e: Vec<u64> = Vec::new();
    while e.len() < len {
        let x = rng.random_range(lo..hi);
        if !e.contains(&x) {
            e.push(x);
        }
    }
    e.sort();
    e
}

fn spread(rng: &mut Generator, len: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    loop {
        let mut t: Vec<f64> = (0..len).map(|_| rng.random_range(lo..hi)).collect();
        t.sort_by(f64::total_cmp);
        if t.windows(2).all(|w| w[1] - w[0] >= gap) {
            return t;
        }
    }
}

fn random_rational(rng: &mut Generator) -> Q {
    Q::new(rng.random_range(-20..=20).into(), rng.random_range(1..=9).into())
}

fn tableau_count_example() -> Check {
    let r = lab(&["schur", "-n", "0,2,4", "-u", "1,1,1"])?;
    ensure(r.results["tableaux"] == "8" && r.results["bialternant"] == "8", || format!("engines gave {}", r.results))?;
    let w = weyl_dimension(&PowerTuple::from_ints(&[0, 2, 4]).unwrap());
    ensure(w.exact.as_deref() == Some("8") && w.value == 8.0, || format!("weyl dimension {w:?}"))?;
    Ok("both engines and the Weyl dimension give 8".into())
}

fn engine_equivalence() -> Check {
    let mut rng = generator(1002);
    let mut tuples: Vec<Vec<u64>> = Vec::new();
    for mask in 1u32..(1 << 9) {
        let t: Vec<u64> = (0..9).filter(|b| mask & (1 << b) != 0).collect();
        if t.len() <= 4 {
            tuples.push(t);
        }
    }
    let mut count = 0;
    for ints in &tuples {
        let n = PowerTuple::from_ints(ints).unwrap();
        for _ in 0..100 {
            let u = loop {
                let u: Vec<Q> = (0..ints.len()).map(|_| random_rational(&mut rng)).collect();
                if (0..u.len()).all(|i| (0..i).all(|j| u[i] != u[j])) {
                    break u;
                }
            };
            let a = schur_tableaux(&n, &u, DEFAULT_TABLEAU_CAP).map_err(|e| e.to_string())?;
            let b = schur_bialternant(ints, &u).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("n={ints:?} u={u:?}: {a} vs {b}"))?;
            count += 1;
        }
    }
    Ok(format!("{} tuples, {count} evaluations, 0 mismatches", tuples.len()))
}

fn monomial_sandwich() -> Check {
    let mut rng = generator(1003);
    let mut worst: f64 = f64::INFINITY;
    for i in 0..10_000 {
        let len = rng.random_range(1..=4);
        let n = if i % 2 == 0 {
            PowerTuple::from_ints(&distinct_ints(&mut rng, len, 0, 9)).unwrap()
        } else {
            let mut e = vec![rng.random_range(0.0..2.0)];
            for _ in 1..len {
                let last = *e.last().unwrap();
                e.push(last + rng.random_range(1.0..2.5));
            }
            PowerTuple::new(e).unwrap()
        };
        let u = PositiveVector::new(spread(&mut rng, len, 0.1, 3.0, 0.05)).unwrap();
        let b = monomial_bounds(&u, &n).map_err(|e| format!("{n:?} {u:?}: {e}"))?;
        let slack = ((b.value - b.lower) / b.lower).min((b.upper - b.value) / b.upper);
        worst = worst.min(slack);
        ensure(slack >= -1e-10, || format!("n={:?} u={:?}: {b:?}", n.exps(), u.coords()))?;
    }
    for ints in [vec![0, 2, 4], vec![1, 3, 4, 8], vec![0, 5], vec![2]] {
        let n = PowerTuple::from_ints(&ints).unwrap();
        let b = monomial_bounds(&PositiveVector::new(vec![1.0; ints.len()]).unwrap(), &n).unwrap();
        ensure((b.value - b.upper).abs() <= 1e-12 * b.upper, || format!("upper bound not attained at ones for {ints:?}: {b:?}"))?;
    }
    Ok(format!("10^4 instances, worst relative slack {worst:.3e}; upper bound attained at all-ones"))
}

fn sharp_threshold() -> Check {
    let n = PowerTuple::from_ints(&[0, 1]).unwrap();
    let c = CoefficientTuple::ones(2);
    let sharp = sharp_c(&n, &c, 2.0, 1.0).unwrap().value;
    ensure(sharp == 5.0, || format!("sharp threshold {sharp}"))?;
    // For n = (0, 1) and M = 2 the rank-one ratio is (u₁u₂)² + (u₁ + u₂)².
    let grid = 1000;
    let mut sup: f64 = 0.0;
    for i in 0..grid {
        for j in 0..grid {
            let (a, b) = ((i as f64 + 0.5) / grid as f64, (j as f64 + 0.5) / grid as f64);
            sup = sup.max((a * b).powi(2) + (a + b).powi(2));
        }
    }
    ensure((5.0 - 1e-2..=5.0).contains(&sup), || format!("grid supremum {sup}"))?;
    for u in [[0.3, 0.7], [0.9, 0.95]] {
        let r = rank1_threshold_at(&PositiveVector::new(u.to_vec()).unwrap(), &n, &c, 2.0).unwrap().value;
        let want = (u[0] * u[1]).powi(2) + (u[0] + u[1]).powi(2);
        ensure((r - want).abs() <= 1e-12 * want, || format!("rank-one ratio at {u:?}: {r} vs {want}"))?;
    }
    let f = |k: f64| PowerSum::new(vec![(0.0, 1.0), (1.0, 1.0), (2.0, -k / 5.0)], Domain::PositiveBounded(1.0)).unwrap();
    let config = CertConfig::default();
    let at = certify_preserver(&f(1.0), 2, &config).unwrap();
    ensure(at.verdict != Verdict::Falsified && at.worst_min_eigenvalue >= -1e-8, || format!("at -1/5: {at:?}"))?;
    let over = certify_preserver(&f(1.02), 2, &config).unwrap();
    ensure(over.verdict == Verdict::Falsified, || format!("at -1.02/5: {:?}", over.verdict))?;
    Ok(format!("C = 5, grid sup {sup:.6}, worst eigenvalue at -1/5 {:.3e}, -1.02/5 falsified", at.worst_min_eigenvalue))
}

fn cauchy_binet() -> Check {
    let mut rng = generator(1005);
    let mut done = 0;
    while done < 1000 {
        let n = rng.random_range(1..=4);
        let support = rng.random_range(n..=6);
        let exps = distinct_ints(&mut rng, support, 0, 9);
        let terms: Vec<(f64, f64)> = exps
            .iter()
            .map(|&e| (e as f64, rng.random_range(1..=8) as f64 / 4.0 * if rng.random_bool(0.3) { -1.0 } else { 1.0 }))
            .collect();
        let f = PowerSum::new(terms, Domain::PositiveUnbounded).unwrap();
        let u: Vec<Q> = (0..n).map(|_| random_rational(&mut rng)).collect();
        let cb = cauchy_binet_det(&f, &u).map_err(|e| e.to_string())?;
        let direct = det_exact(&entrywise_rank_one_exact(&f, &u).unwrap()).unwrap();
        ensure(cb == direct, || format!("{f} at {u:?}: {cb} vs {direct}"))?;
        done += 1;
    }
    Ok("10^3 exact matches".into())
}

fn rayleigh_vs_rank_one() -> Check {
    let mut rng = generator(1006);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let len = rng.random_range(1..=4);
        let n = PowerTuple::from_ints(&distinct_ints(&mut rng, len, 0, 5)).unwrap();
        let c = CoefficientTuple::new((0..len).map(|_| rng.random_range(0.5..2.0)).collect()).unwrap();
        let m = n.last() + rng.random_range(1..4) as f64;
        let u = spread(&mut rng, len, 0.3, 1.2, 0.1);
        let a = SymMatrix::outer(&u).unwrap();
        let ray = rayleigh_threshold(&a, &n, &c, m).map_err(|e| e.to_string())?.value;
        let r1 = rank1_threshold_at(&PositiveVector::new(u.clone()).unwrap(), &n, &c, m).unwrap().value;
        let rel = (ray - r1).abs() / r1;
        worst = worst.max(rel);
        ensure(rel <= 1e-8, || format!("n={:?} M={m} u={u:?}: {ray} vs {r1}", n.exps()))?;
    }
    Ok(format!("10^3 rank-one instances, worst relative gap {worst:.3e}"))
}

fn hciz_consistency() -> Check {
    let mut rng = generator(1007);
    let mut within = 0;
    let mut worst_z: f64 = 0.0;
    for i in 0..20 {
        let len = rng.random_range(1..=4);
        let alpha = spread(&mut rng, len, 0.0, 2.0, 0.05);
        let x = spread(&mut rng, len, 0.0, 2.0, 0.05);
        let exact = hciz_exact(&alpha, &x).map_err(|e| e.to_string())?;
        // A Schur–Horn sandwich violation in any sample is an error here.
        let mc = hciz_mc(&alpha, &x, 100_000, 7000 + i).map_err(|e| e.to_string())?;
        let gap = (mc.mean - exact).abs();
        if gap <= 4.0 * mc.stderr + 1e-12 * exact {
            within += 1;
        }
        if mc.stderr > 0.0 {
            worst_z = worst_z.max(gap / mc.stderr);
        }
    }
    ensure(within >= 19, || format!("only {within}/20 within 4 standard errors"))?;
    Ok(format!("{within}/20 within 4 standard errors (largest z = {worst_z:.2}); sandwich held on every sample"))
}

fn random_moments(rng: &mut Generator, n: usize) -> Vec<f64> {
    if rng.random_bool(0.5) {
        let atoms = rng.random_range(1..=n + 1);
        let pts: Vec<(f64, f64)> = (0..atoms).map(|_| (rng.random_range(0.0..2.0), rng.random_range(0.1..1.0))).collect();
        (0..2 * n - 1).map(|k| pts.iter().map(|(x, w)| w * x.powi(k as i32)).sum()).collect()
    } else {
        (0..2 * n - 1).map(|_| rng.random_range(-0.5..2.0)).collect()
    }
}

fn tn_hankel() -> Check {
    let mut rng = generator(1008);
    let mut tn = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=4);
        let m = HankelMoments::new(random_moments(&mut rng, n)).unwrap();
        let fast = is_tn_hankel(&m, 1e-9).unwrap().is_tn;
        let brute = is_tn_brute(hankel_build(&m).matrix(), 1e-9);
        ensure(fast == brute, || format!("moments {:?}: test {fast}, brute force {brute}", m.moments()))?;
        tn += fast as usize;
    }
    Ok(format!("10^3 sequences agree ({tn} totally non-negative)"))
}

fn same_ordering_pair(rng: &mut Generator, n: usize, k: usize) -> (IndexTuple, IndexTuple) {
    let (a, b) = (distinct_ints(rng, k, 1, n as u64 + 1), distinct_ints(rng, k, 1, n as u64 + 1));
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let apply = |t: &[u64]| IndexTuple::new(perm.iter().map(|&p| t[p] as usize).collect(), n).unwrap();
    (apply(&a), apply(&b))
}

fn int_matrix(rng: &mut Generator, rows: usize, cols: usize) -> RationalMatrix {
    let entries = (0..rows).map(|_| (0..cols).map(|_| rational::from_i64(rng.random_range(-9..=9))).collect()).collect();
    RationalMatrix::from_rows(entries).unwrap()
}

fn log_supermodularity() -> Check {
    let mut rng = generator(1009);
    let mut zero = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(1..=n.min(3));
        let x = distinct_ints(&mut rng, n, 1, 12);
        let y = distinct_ints(&mut rng, n, 0, 8);
        let a = RationalMatrix::from_fn(n, n, |i, j| rational::pow(&rational::from_i64(x[i] as i64), y[j] as u32));
        let (i1, i2) = same_ordering_pair(&mut rng, n, k);
        let (j1, j2) = same_ordering_pair(&mut rng, n, k);
        let r = logsup_residual_exact(&a, &i1, &i2, &j1, &j2).map_err(|e| e.to_string())?;
        ensure(!r.is_negative(), || format!("x={x:?} y={y:?} residual {r}"))?;
        zero += r.is_zero() as usize;
    }
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let a = int_matrix(&mut rng, n, n);
        let i1 = rng.random_range(1..n);
        let i2 = rng.random_range(i1 + 1..=n);
        let j1 = rng.random_range(1..n);
        let j2 = rng.random_range(j1 + 1..=n);
        let d = dodgson_residual(&a, i1, i2, j1, j2).map_err(|e| e.to_string())?;
        ensure(d.is_zero(), || format!("Dodgson residual {d}"))?;
    }
    for _ in 0..1000 {
        let n = rng.random_range(2..=6);
        let col = |rng: &mut Generator| (0..n).map(|_| rational::from_i64(rng.random_range(-9..=9))).collect::<Vec<Q>>();
        let (x1, x2, y1, y2) = (col(&mut rng), col(&mut rng), col(&mut rng), col(&mut rng));
        let b = int_matrix(&mut rng, n, n - 2);
        let r = karlin_residual(&x1, &x2, &y1, &y2, &b).map_err(|e| e.to_string())?;
        ensure(r.is_zero(), || format!("Karlin residual {r}"))?;
    }
    Ok(format!("10^3 exact residuals >= 0 ({zero} exactly 0); Dodgson and Karlin residuals 0 on 10^3 each"))
}

fn prefix_deficit(m: &[f64], n: &[f64]) -> f64 {
    let desc = |v: &[f64]| {
        let mut d = v.to_vec();
        d.sort_by(|a, b| b.total_cmp(a));
        d
    };
    let (dm, dn) = (desc(m), desc(n));
    let (mut sm, mut sn, mut worst) = (0.0, 0.0, f64::NEG_INFINITY);
    for k in 0..dm.len() {
        sm += dm[k];
        sn += dn[k];
        worst = worst.max(sn - sm);
    }
    worst
}

fn cgs_both_directions() -> Check {
    let mut rng = generator(1010);
    let (mut forward, mut converse, mut probes) = (0, 0, 0);
    while forward < 100 || converse < 100 {
        let len = rng.random_range(1..=4);
        let m = spread(&mut rng, len, 0.0, 5.0, 0.05);
        let n = spread(&mut rng, len, 0.0, 5.0, 0.05);
        match weak_majorize(&m, &n).unwrap() {
            Majorization::Neither if converse < 100 && prefix_deficit(&m, &n) >= 0.25 => {
                converse += 1;
                match cgs_converse_search(&m, &n, 1000, converse).unwrap() {
                    ConverseOutcome::Violation { probe, .. } => probes = probes.max(probe),
                    other => return Err(format!("m={m:?} n={n:?}: {other:?}")),
                }
            }
            Majorization::Majorizes | Majorization::WeaklyMajorizes if forward < 100 => {
                forward += 1;
                for _ in 0..20 {
                    let u = spread(&mut rng, len, 1.0, 10.0, 0.05);
                    let r = cgs_check(&m, &n, &u).unwrap();
                    ensure(r.holds, || format!("m={m:?} n={n:?} u={u:?}: {r:?}"))?;
                }
            }
            _ => {}
        }
    }
    Ok(format!("100 forward pairs x 20 points clean; 100 converse witnesses (latest at probe {probes})"))
}

fn dominance_and_induction() -> Check {
    let mut rng = generator(1011);
    let mut worst: f64 = f64::INFINITY;
    for _ in 0..1000 {
        let len = rng.random_range(2..=5);
        let mut e = distinct_ints(&mut rng, len - 1, 1, 12);
        e.insert(0, 0);
        let cv: Vec<f64> = (0..len).map(|_| rng.random_range(0.1..3.0)).collect();
        let c = CoefficientTuple::new(cv.clone()).unwrap();
        let m = e[len - 1] + rng.random_range(1..6);
        let rho = rng.random_range(0.2..3.0);
        let n = PowerTuple::from_ints(&e).unwrap();
        let sharp = sharp_c(&n, &c, m as f64, rho).unwrap().value;
        let k = qualitative_k(&n, &c, m as f64, rho, KVariant::Integer).unwrap().value;
        let kr = qualitative_k(&n, &c, m as f64, rho, KVariant::RealFull).unwrap().value;
        let e2: Vec<u64> = e[1..].iter().map(|x| x - 1).collect();
        let c2 = CoefficientTuple::new((1..len).map(|j| e[j] as f64 * cv[j]).collect()).unwrap();
        let k2 = qualitative_k(&PowerTuple::from_ints(&e2).unwrap(), &c2, (m - 1) as f64, rho, KVariant::Integer).unwrap().value;
        for (lhs, rhs, what) in [(k, sharp, "K >= C"), (kr, sharp, "K_real >= C"), (k, m as f64 * k2, "K >= M K~")] {
            let slack = (lhs - rhs) / rhs;
            worst = worst.min(slack);
            ensure(slack >= -1e-10, || format!("{what} fails for n={e:?} M={m} rho={rho}: {lhs} vs {rhs}"))?;
        }
    }
    Ok(format!("10^3 instances, worst relative slack {worst:.3e}"))
}

fn cube_scan() -> Check {
    let pts = cube_asymptotic_scan(TupleFamily::Arithmetic { start: 0.0, step: 1.0 }, 1.0, &[1.0, 3.0], 1.0, 3..=40)
        .map_err(|e| e.to_string())?;
    let r = |d: usize| pts.iter().find(|p| p.dim == d).unwrap().ratio;
    ensure(pts.iter().all(|p| p.ratio >= 1.0), || "some ratio below 1".into())?;
    ensure(r(40) <= 1.1, || format!("r(40) = {}", r(40)))?;
    ensure((r(40) - 1.0).abs() < (r(10) - 1.0).abs(), || format!("r(10) = {}, r(40) = {}", r(10), r(40)))?;
    Ok(format!("r(10) = {:.6}, r(40) = {:.6}", r(10), r(40)))
}

fn counterexamples() -> Check {
    let w = two_sided_witness(1, 1.0, 2.0).map_err(|e| e.to_string())?;
    ensure(w == -4.0, || format!("two-sided value {w}"))?;
    match complex_counterexample(&PowerTuple::from_ints(&[0, 2]).unwrap(), 1.0).map_err(|e| e.to_string())? {
        ComplexOutcome::Found { z0, m, .. } => {
            ensure(z0.re == -1.0 && z0.im == 0.0 && m == 3, || format!("z0 = {z0}, M = {m}"))?;
        }
        other => return Err(format!("{other:?}")),
    }
    Ok("two-sided value -4; z0 = -1, M = 3".into())
}

fn determinism() -> Check {
    let commands: &[&[&str]] = &[
        &["--seed", "11", "certify", "-f", "1 + x - 0.21*x^2", "-N", "2", "--rho", "1", "--samples", "2000"],
        &["--seed", "12", "certify", "-f", "1 + x^2 + x^4 - 0.001*x^5", "-N", "3", "--two-sided", "1", "--samples", "2000"],
        &["--seed", "13", "sign-series", "--base", "0,1", "--tail", "2:-1,3:1,4:1", "--unbounded", "--samples", "1000"],
        &["--seed", "14", "hciz", "--alpha", "0,1,2", "-x", "0,0.5,1.5", "--samples", "20000"],
        &["--seed", "15", "majorize", "-m", "0.5,1", "-n", "0,2", "--search", "--budget", "500"],
    ];
    let strip = |s: &str| s.lines().filter(|l| !l.contains("elapsed_seconds")).collect::<Vec<_>>().join("\n");
    for args in commands {
        let a = lab(args)?.to_json();
        let b = lab(args)?.to_json();
        ensure(strip(&a) == strip(&b), || format!("{args:?} differs between runs"))?;
    }
    // Also across processes, through the binary.
    let bin = env!("CARGO_BIN_EXE_preserver-lab");
    let run = || std::process::Command::new(bin).args(commands[3]).output().map(|o| String::from_utf8_lossy(&o.stdout).into_owned());
    let (a, b) = (run().map_err(|e| e.to_string())?, run().map_err(|e| e.to_string())?);
    ensure(!a.is_empty() && strip(&a) == strip(&b), || "binary output differs between runs".into())?;
    Ok(format!("{} seeded commands replay byte-identically", commands.len()))
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Check)> = vec![
        ("tableau count example: dimension 8", Duration::from_secs(1), tableau_count_example),
        ("engine equivalence", Duration::from_secs(60), engine_equivalence),
        ("monomial bounds", Duration::from_secs(30), monomial_sandwich),
        ("sharp threshold", Duration::from_secs(120), sharp_threshold),
        ("Cauchy-Binet oracle", Duration::from_secs(60), cauchy_binet),
        ("Rayleigh vs rank-one", Duration::from_secs(60), rayleigh_vs_rank_one),
        ("HCIZ Monte Carlo", Duration::from_secs(300), hciz_consistency),
        ("TN Hankel", Duration::from_secs(60), tn_hankel),
        ("log-supermodularity", Duration::from_secs(120), log_supermodularity),
        ("determinant criterion both directions", Duration::from_secs(180), cgs_both_directions),
        ("dominance and induction step", Duration::from_secs(30), dominance_and_induction),
        ("cube asymptotics", Duration::from_secs(10), cube_scan),
        ("two-sided and complex counterexamples", Duration::from_secs(1), counterexamples),
        ("determinism", Duration::from_secs(10), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!("criterion {:>2} {} {name} ({:.2}s): {detail}", i + 1, if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
