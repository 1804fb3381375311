use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use preserver_core::hciz::{gv_bounds_check, hciz_exact, hciz_mc};
use preserver_core::matrix::{
    hankel_build, is_tn_brute, is_tn_hankel, read_matrix_csv, read_moments_csv, read_sym_csv, HankelMoments, IndexTuple, Matrix,
    RationalMatrix,
};
use preserver_core::order::{
    cgs_check, cgs_converse_search, logsup_check, logsup_residual_exact, tuple_meet_join, weak_majorize, ConverseOutcome,
    Majorization, CGS_TOL, MAJORIZATION_TOL,
};
use preserver_core::preserver::{
    certify_preserver, complex_counterexample, construct_sign_series, horn_sign_check, two_sided_witness, CertConfig,
    ComplexOutcome, Domain, PowerSum, SeriesDomain, SignPattern, Verdict,
};
use preserver_core::rational::{self, Q};
use preserver_core::symfun::{schur_bialternant, schur_tableaux, schur_value, weyl_dimension, PositiveVector, PowerTuple, DEFAULT_DISTINCT_GAP};
use preserver_core::thresholds::{
    cube_asymptotic_scan, cube_bounds, qualitative_k, rank1_threshold_at, rayleigh_threshold, series_threshold, sharp_c,
    CoefficientTuple, KVariant, SeriesTail, ThresholdReport, TupleFamily, PINV_CUTOFF, SERIES_TOL,
};

use crate::args::*;
use crate::report::{Report, Status, Timing};
use crate::CliError;

type Out = Result<Report, CliError>;

/// Relative slack on the generalized Vandermonde sandwich.
const GV_SLACK: f64 = 1e-10;
/// Monte Carlo agreement is judged at this many standard errors.
const MC_SIGMAS: f64 = 4.0;

pub(crate) fn run(command: &Command, seed: u64) -> Out {
    match command {
        Command::Schur(a) => schur(a),
        Command::Threshold(a) => threshold(a),
        Command::Certify(a) => certify(a, seed),
        Command::SignSeries(a) => sign_series(a, seed),
        Command::Hciz(a) => hciz(a, seed),
        Command::Majorize(a) => majorize(a, seed),
        Command::Tn(a) => tn(a),
        Command::Logsup(a) => logsup(a),
        Command::Counterexample(a) => counterexample(a),
    }
    .map(|mut r| {
        r.seed = seed;
        r
    })
}

fn report(command: &str, inputs: Value, violation: bool, results: Value, tolerances: Value) -> Report {
    Report {
        command: command.into(),
        inputs,
        seed: 0,
        status: if violation { Status::Violation } else { Status::Ok },
        results,
        tolerances,
        timing: Timing { elapsed_seconds: 0.0 },
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_f64s(items: &[String]) -> Result<Vec<f64>, CliError> {
    items.iter().map(|s| s.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad number {s:?}")))).collect()
}

fn parse_qs(items: &[String]) -> Result<Vec<Q>, CliError> {
    items.iter().map(|s| rational::parse(s).map_err(CliError::from)).collect()
}

fn q_strings(q: &[Q]) -> Vec<String> {
    q.iter().map(rational::to_string).collect()
}

fn coefficients(c: &[f64], len: usize) -> Result<CoefficientTuple, CliError> {
    Ok(if c.is_empty() { CoefficientTuple::ones(len) } else { CoefficientTuple::new(c.to_vec())? })
}

fn schur(a: &SchurArgs) -> Out {
    let n = PowerTuple::new(parse_f64s(&a.n)?)?;
    let Some(ints) = n.ints() else {
        let u = parse_f64s(&a.u)?;
        let value = schur_value(&u, &n)?;
        return Ok(report(
            "schur",
            json!({"n": n.exps(), "u": u, "engine": "float"}),
            false,
            json!({"value": value}),
            json!({"distinct_gap": DEFAULT_DISTINCT_GAP}),
        ));
    };
    let u = parse_qs(&a.u)?;
    let inputs = json!({"n": ints, "u": q_strings(&u), "engine": format!("{:?}", a.engine).to_lowercase()});
    let tab = matches!(a.engine, Engine::Tableaux | Engine::Both).then(|| schur_tableaux(&n, &u, a.cap)).transpose()?;
    let bia = matches!(a.engine, Engine::Bialternant | Engine::Both).then(|| schur_bialternant(&ints, &u)).transpose()?;
    let equal = match (&tab, &bia) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    };
    let value = tab.as_ref().or(bia.as_ref()).map(rational::to_f64);
    let mut results = json!({"value": value, "weyl_dimension": weyl_dimension(&n)});
    if let Some(t) = &tab {
        results["tableaux"] = json!(rational::to_string(t));
    }
    if let Some(b) = &bia {
        results["bialternant"] = json!(rational::to_string(b));
    }
    if let Some(e) = equal {
        results["equal"] = json!(e);
    }
    Ok(report("schur", inputs, equal == Some(false), results, json!({"tableau_cap": a.cap})))
}

fn threshold(a: &ThresholdArgs) -> Out {
    let exps = match (a.dim, a.n.is_empty()) {
        (Some(d), true) => (0..d).map(|j| j as f64).collect(),
        (Some(d), false) if d != a.n.len() => return Err(CliError::usage(format!("-N {d} but -n has {} entries", a.n.len()))),
        _ => a.n.clone(),
    };
    let mut inputs = json!({"n": exps, "c": a.c, "M": a.m, "rho": a.rho});
    let need_m = || a.m.ok_or_else(|| CliError::usage("this threshold needs -M"));
    let tuple = || -> Result<PowerTuple, CliError> {
        if exps.is_empty() {
            return Err(CliError::usage("this threshold needs -n or -N"));
        }
        Ok(PowerTuple::new(exps.clone())?)
    };
    let single = |r: ThresholdReport| json!({"value": r.value, "formula": r.formula, "extras": r.inputs.extras, "witness": r.witness});
    if a.geometric.as_ref().is_some_and(|g| g.len() != 2) || a.dims.len() != 2 {
        return Err(CliError::usage("--geometric and --dims take exactly two values"));
    }
    let mut tolerances = json!({});
    let results = if a.sharp {
        let n = tuple()?;
        single(sharp_c(&n, &coefficients(&a.c, n.len())?, need_m()?, a.rho)?)
    } else if let Some(v) = a.qualitative {
        let n = tuple()?;
        let variant = match v {
            Variant::Integer => KVariant::Integer,
            Variant::RealRank1 => KVariant::RealRank1,
            Variant::RealFull => KVariant::RealFull,
            Variant::TwoSided => KVariant::TwoSided,
        };
        inputs["variant"] = json!(variant);
        single(qualitative_k(&n, &coefficients(&a.c, n.len())?, need_m()?, a.rho, variant)?)
    } else if a.rank1 {
        let n = tuple()?;
        inputs["u"] = json!(a.u);
        single(rank1_threshold_at(&PositiveVector::new(a.u.clone())?, &n, &coefficients(&a.c, n.len())?, need_m()?)?)
    } else if let Some(path) = &a.rayleigh {
        let n = tuple()?;
        let m = read_sym_csv(&read(path)?)?;
        inputs["matrix"] = json!(m.matrix().to_rows());
        tolerances["pinv_cutoff"] = json!(PINV_CUTOFF);
        single(rayleigh_threshold(&m, &n, &coefficients(&a.c, n.len())?, need_m()?)?)
    } else if let Some(g) = &a.geometric {
        let n = tuple()?;
        inputs["geometric"] = json!({"amplitude": g[0], "ratio": g[1]});
        tolerances["series"] = json!(SERIES_TOL);
        let tail = SeriesTail::Geometric { amplitude: g[0], ratio: g[1] };
        single(series_threshold(&n, &coefficients(&a.c, n.len())?, a.rho, &tail)?)
    } else if a.cube {
        let n = tuple()?;
        inputs["alpha"] = json!(a.alpha);
        to_value(&cube_bounds(&n, &coefficients(&a.c, n.len())?, a.rho, &a.alpha)?)
    } else {
        let c = match a.c.as_slice() {
            [] => 1.0,
            [c] => *c,
            _ => return Err(CliError::usage("the cube scan takes a single constant coefficient")),
        };
        let (lo, hi) = (a.dims[0], a.dims[1]);
        inputs = json!({"family": "n_j = j", "c": c, "rho": a.rho, "alpha": a.alpha, "dims": [lo, hi]});
        let points = cube_asymptotic_scan(TupleFamily::Arithmetic { start: 0.0, step: 1.0 }, c, &a.alpha, a.rho, lo..=hi)?;
        json!({"points": points})
    };
    Ok(report("threshold", inputs, false, results, tolerances))
}

fn domain_of(d: &DomainArgs) -> Result<Domain, CliError> {
    match (d.rho, d.unbounded, d.two_sided) {
        (Some(r), false, None) => Ok(Domain::PositiveBounded(r)),
        (None, true, None) => Ok(Domain::PositiveUnbounded),
        (None, false, Some(r)) => Ok(Domain::TwoSided(r)),
        _ => Err(CliError::usage("give exactly one of --rho, --unbounded, --two-sided")),
    }
}

fn certify(a: &CertifyArgs, seed: u64) -> Out {
    let domain = domain_of(&a.domain)?;
    let f = PowerSum::parse(&a.function, domain)?;
    let config = CertConfig { samples: a.samples, ranks: a.ranks.clone(), tol: a.tol, seed };
    let r = certify_preserver(&f, a.dim, &config)?;
    let inputs = json!({"function": f.to_string(), "N": a.dim, "domain": domain, "samples": a.samples, "ranks": a.ranks});
    let results = json!({"verdict": r.verdict, "report": r});
    Ok(report("certify", inputs, r.verdict == Verdict::Falsified, results, json!({"eigenvalue": a.tol})))
}

fn parse_tail(items: &[String]) -> Result<Vec<(u64, i8)>, CliError> {
    items
        .iter()
        .map(|s| {
            let bad = || CliError::usage(format!("tail entry {s:?} is not of the form M:s"));
            let (m, e) = s.split_once(':').ok_or_else(bad)?;
            Ok((m.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn sign_series(a: &SignSeriesArgs, seed: u64) -> Out {
    let base = PowerTuple::from_ints(&a.base)?;
    let c = coefficients(&a.c, base.len())?;
    let tail = parse_tail(&a.tail)?;
    let pattern = SignPattern::new(base.clone(), tail.clone())?;
    let (domain, cert_domain) = match (a.rho, a.unbounded) {
        (Some(r), false) => (SeriesDomain::Bounded(r), Domain::PositiveBounded(r)),
        (None, true) => (SeriesDomain::Unbounded, Domain::PositiveUnbounded),
        _ => return Err(CliError::usage("give exactly one of --rho, --unbounded")),
    };
    let m_max = a.m_max.unwrap_or_else(|| tail.last().map_or(a.base[a.base.len() - 1] + 1, |t| t.0));
    let f = construct_sign_series(&pattern, &c, domain, m_max)?.with_domain(cert_domain)?;
    let horn = horn_sign_check(&f, base.len());
    let cert = certify_preserver(&f, base.len(), &CertConfig { samples: a.samples, seed, ..CertConfig::default() })?;
    let inputs = json!({"base": a.base, "c": c.values(), "tail": tail, "domain": domain, "m_max": m_max, "samples": a.samples});
    let results = json!({"series": f.to_string(), "terms": f.terms(), "horn": horn, "verdict": cert.verdict, "certification": cert});
    let tolerances = json!({"eigenvalue": CertConfig::default().tol});
    Ok(report("sign-series", inputs, cert.verdict == Verdict::Falsified, results, tolerances))
}

fn hciz(a: &HcizArgs, seed: u64) -> Out {
    let exact = hciz_exact(&a.alpha, &a.x)?;
    let mc = hciz_mc(&a.alpha, &a.x, a.samples, seed)?;
    let gap = (mc.mean - exact).abs();
    let agrees = gap <= MC_SIGMAS * mc.stderr + 1e-12 * exact.abs();
    let mut inputs = json!({"alpha": a.alpha, "x": a.x, "samples": a.samples});
    let mut results = json!({"exact": exact, "mc": mc, "abs_error": gap, "within_band": agrees});
    let mut violation = !agrees;
    if !a.u.is_empty() {
        let b = gv_bounds_check(&PositiveVector::new(a.u.clone())?, &a.alpha)?;
        inputs["u"] = json!(a.u);
        results["gv_bounds"] = json!({"lower": b.lower, "det": b.det, "upper": b.upper, "holds": b.holds(GV_SLACK)});
        violation |= !b.holds(GV_SLACK);
    }
    Ok(report("hciz", inputs, violation, results, json!({"stderr_multiple": MC_SIGMAS, "gv_slack": GV_SLACK})))
}

fn majorize(a: &MajorizeArgs, seed: u64) -> Out {
    let verdict = weak_majorize(&a.m, &a.n)?;
    let mut inputs = json!({"m": a.m, "n": a.n});
    let mut results = json!({
        "majorization": verdict,
        "weakly_majorizes": verdict != Majorization::Neither,
    });
    let mut violation = false;
    if !a.u.is_empty() {
        let r = cgs_check(&a.m, &a.n, &a.u)?;
        inputs["u"] = json!(a.u);
        results["cgs"] = to_value(&r);
        violation |= !r.holds;
    }
    if a.search {
        let out = cgs_converse_search(&a.m, &a.n, a.budget, seed)?;
        inputs["budget"] = json!(a.budget);
        violation |= matches!(out, ConverseOutcome::Violation { .. });
        results["search"] = to_value(&out);
    }
    Ok(report("majorize", inputs, violation, results, json!({"majorization": MAJORIZATION_TOL, "cgs": CGS_TOL})))
}

fn tn(a: &TnArgs) -> Out {
    let moments = match &a.moments_file {
        Some(p) => read_moments_csv(&read(p)?)?,
        None => a.moments.clone(),
    };
    let m = HankelMoments::new(moments.clone())?;
    let r = is_tn_hankel(&m, a.tol)?;
    let brute = is_tn_brute(hankel_build(&m).matrix(), a.tol);
    let results = json!({"is_tn": r.is_tn, "report": r, "brute_force": brute, "agrees": brute == r.is_tn});
    Ok(report("tn", json!({"moments": moments}), !r.is_tn, results, json!({"psd": a.tol})))
}

fn tuples(a: &LogsupArgs, rows: usize, cols: usize) -> Result<[IndexTuple; 4], CliError> {
    Ok([
        IndexTuple::new(a.i1.clone(), rows)?,
        IndexTuple::new(a.i2.clone(), rows)?,
        IndexTuple::new(a.j1.clone(), cols)?,
        IndexTuple::new(a.j2.clone(), cols)?,
    ])
}

fn logsup(a: &LogsupArgs) -> Out {
    let mut inputs = json!({"i1": a.i1, "i2": a.i2, "j1": a.j1, "j2": a.j2, "exact": a.exact});
    if a.exact {
        let u = parse_qs(&a.vandermonde_u)?;
        let n = a
            .vandermonde_n
            .iter()
            .map(|s| s.trim().parse::<u32>().map_err(|_| CliError::usage(format!("exact mode needs integral exponents, got {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let m = RationalMatrix::from_fn(u.len(), n.len(), |i, j| rational::pow(&u[i], n[j]));
        let [i1, i2, j1, j2] = tuples(a, u.len(), n.len())?;
        let residual = logsup_residual_exact(&m, &i1, &i2, &j1, &j2)?;
        let (im, ij) = tuple_meet_join(&i1, &i2)?;
        let (jm, jj) = tuple_meet_join(&j1, &j2)?;
        inputs["vandermonde"] = json!({"u": q_strings(&u), "n": n});
        let holds = residual >= Q::from_integer(0.into());
        let results = json!({
            "residual": rational::to_string(&residual),
            "meet": [im.indices(), jm.indices()],
            "join": [ij.indices(), jj.indices()],
            "holds": holds,
        });
        return Ok(report("logsup", inputs, !holds, results, json!({"residual": 0.0})));
    }
    let m = match &a.matrix {
        Some(p) => {
            let m = read_matrix_csv(&read(p)?)?;
            inputs["matrix"] = json!(m.to_rows());
            m
        }
        None => {
            let u = parse_f64s(&a.vandermonde_u)?;
            let n = parse_f64s(&a.vandermonde_n)?;
            inputs["vandermonde"] = json!({"u": u, "n": n});
            Matrix::from_fn(u.len(), n.len(), |i, j| u[i].powf(n[j]))
        }
    };
    let [i1, i2, j1, j2] = tuples(a, m.rows(), m.cols())?;
    let r = logsup_check(&m, &i1, &i2, &j1, &j2)?;
    let holds = r.holds(a.tol);
    let results = json!({"residual": r.residual, "scale": r.scale, "meet": r.meet, "join": r.join, "holds": holds});
    Ok(report("logsup", inputs, !holds, results, json!({"residual": a.tol})))
}

fn counterexample(a: &CounterexampleArgs) -> Out {
    if a.two_sided {
        let value = two_sided_witness(a.k, a.t, a.rho)?;
        let h = a.rho / 2.0;
        let inputs = json!({"kind": "two_sided", "k": a.k, "t": a.t, "rho": a.rho});
        let results = json!({
            "value": value,
            "matrix": [[h, -h], [-h, h]],
            "vector": [1, -1],
        });
        return Ok(report("counterexample", inputs, value < 0.0, results, json!({})));
    }
    if a.n.is_empty() {
        return Err(CliError::usage("--complex needs -n"));
    }
    let out = complex_counterexample(&PowerTuple::from_ints(&a.n)?, a.rho)?;
    let inputs = json!({"kind": "complex", "n": a.n, "rho": a.rho});
    let found = matches!(out, ComplexOutcome::Found { .. });
    Ok(report("counterexample", inputs, found, to_value(&out), json!({"span": 1e-10})))
}
