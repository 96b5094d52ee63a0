//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bej_core::expr::Expr;
use bej_core::families::FunctionSampler;
use bej_core::gruss::{
    bounds_prepared, classical_chebyshev_check, classical_gruss_bound, integral_chebyshev_functional, BoundKind,
    GrussConfig, PreparedFunction, RangeBounds,
};
use bej_core::modulus::{least_concave_majorant, modulus_curve, GridFunction, DEFAULT_GRID};
use bej_core::moments::{moments_exact, moments_in};
use bej_core::oracle::{central_moment_exact, t11_exact, RationalPolynomial};
use bej_core::quadrature::CompositeRule;
use bej_core::scalar::rational;
use bej_core::tables::{Column, Registry, Verdict};
use bej_core::*;
use num_rational::BigRational;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fin(k: u32) -> ExtendedIndex {
    ExtendedIndex::Finite(k)
}

fn rate(p: i64, q: i64) -> ExtendedRate {
    ExtendedRate::Finite(Param::ratio(p, q))
}

fn jacobi_values() -> Vec<Param> {
    vec![Param::int(-1), Param::int(0), Param::int(1), Param::ratio(3, 2)]
}

fn rates_for(n: u32) -> Vec<ExtendedRate> {
    vec![rate(1, 1), rate(5, 2), rate(n as i64, 1)]
}

fn grid_points() -> Vec<BigRational> {
    [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)].iter().map(|&(p, q)| rational(p, q)).collect()
}

/// Every type I and type II spec of the exactness grid.
fn exactness_grid() -> Vec<BejSpec> {
    let idx = [2u32, 3, 5, 8];
    let jac = jacobi_values();
    let mut specs = Vec::new();
    for &m in &idx {
        for &n in &idx {
            for r in rates_for(n) {
                for a in &jac {
                    for b in &jac {
                        let s = Bej1Spec::new(fin(m), fin(n), r.clone(), a.clone(), b.clone()).unwrap();
                        specs.push(BejSpec::TypeI(s));
                    }
                }
            }
        }
    }
    for &n in &idx {
        for s in rates_for(n) {
            for r in rates_for(n) {
                for (c, d) in jac.iter().zip(jac.iter().rev()) {
                    for a in &jac {
                        for b in &jac {
                            let spec = Bej2Spec::new(fin(n), s.clone(), c.clone(), d.clone(), r.clone(), a.clone(), b.clone())
                                .unwrap();
                            specs.push(BejSpec::TypeII(spec));
                        }
                    }
                }
            }
        }
    }
    specs
}

fn criterion_exactness() -> Outcome {
    let specs = exactness_grid();
    let xs = grid_points();
    let mut checks = 0usize;
    for spec in &specs {
        let op = spec.descriptor().map_err(|e| e.to_string())?;
        let first = central_moment_exact(&op, 1).map_err(|e| e.to_string())?;
        let second = central_moment_exact(&op, 2).map_err(|e| e.to_string())?;
        for x in &xs {
            let m = moments_exact(spec, x).map_err(|e| e.to_string())?;
            ensure(m.first == first.eval(x) && m.second == second.eval(x), || format!("{op} at x={x}"))?;
            checks += 2;
        }
    }
    Ok(format!("{} specs, {checks} exact comparisons", specs.len()))
}

fn criterion_tables() -> Outcome {
    let reg = Registry::builtin();
    let reports = reg.reconcile_all().map_err(|e| e.to_string())?;
    let mut matched = 0;
    let mut flagged = Vec::new();
    for rep in &reports {
        ensure(rep.instances.len() >= 3, || format!("{} has fewer than 3 instances", rep.key))?;
        for col in &rep.columns {
            ensure(!col.is_undocumented_mismatch(), || format!("undocumented mismatch {} {}", rep.key, col.column.as_str()))?;
            ensure(!col.is_stale_erratum(), || format!("stale erratum {} {}", rep.key, col.column.as_str()))?;
            match col.verdict {
                Verdict::Match => matched += 1,
                Verdict::Mismatch => flagged.push(format!("{}:{}", rep.key, col.column.as_str())),
            }
        }
    }
    for table in 1..=7 {
        for row in reg.table(table).map_err(|e| e.to_string())? {
            let rep = reports.iter().find(|r| r.key == row.key).expect("row reconciled");
            for &c in Registry::table_columns(table) {
                ensure(rep.column(c).is_some(), || format!("table {table} row {} lacks {}", row.key, c.as_str()))?;
            }
        }
    }
    let nabla = reports.iter().find(|r| r.key == "L_n_nabla").and_then(|r| r.column(Column::SecondMoment));
    let nabla = nabla.ok_or("L_n_nabla missing")?;
    ensure(nabla.verdict == Verdict::Mismatch, || "L_n_nabla not flagged".into())?;
    let fixed = nabla.erratum.as_ref().ok_or("L_n_nabla has no corrected value")?;
    ensure(fixed.corrected_matches, || "L_n_nabla correction disagrees with the oracle".into())?;
    Ok(format!("{} rows, {matched} columns match, {} documented errata: {}", reports.len(), flagged.len(), flagged.join(" ")))
}

fn criterion_sharpness() -> Outcome {
    let op = OperatorDescriptor::bernstein(1).map_err(|e| e.to_string())?;
    let cfg = GrussConfig::default();
    let e1 = PreparedFunction::new(&Function::e1(), cfg.modulus_grid).map_err(|e| e.to_string())?;
    let ev = bounds_prepared(&op, &e1, &e1, 0.5, &[BoundKind::Cg1], &cfg).map_err(|e| e.to_string())?.remove(0);
    ensure((ev.lhs - 0.25).abs() <= 1e-12 && (ev.rhs - 0.25).abs() <= 1e-12, || format!("{ev:?}"))?;
    Ok(format!("lhs={} rhs={}", ev.lhs, ev.rhs))
}

/// Operators for the inequality suite with whether they reproduce `e1`.
fn inequality_operators() -> Vec<(BejSpec, bool)> {
    let p = Param::ratio;
    let inf = ExtendedIndex::Infinity;
    let one = |m, n, r, a, b| BejSpec::TypeI(Bej1Spec::new(m, n, r, a, b).unwrap());
    let two = |n, s, c, d, r, a, b| BejSpec::TypeII(Bej2Spec::new(n, s, c, d, r, a, b).unwrap());
    vec![
        (one(fin(5), fin(5), ExtendedRate::Infinity, p(0, 1), p(0, 1)), true),
        (one(inf, fin(4), rate(4, 1), p(-1, 1), p(-1, 1)), true),
        (one(fin(6), inf, rate(6, 1), p(-1, 1), p(-1, 1)), true),
        (one(inf, inf, rate(4, 1), p(0, 1), p(0, 1)), false),
        (one(fin(5), inf, rate(5, 1), p(0, 1), p(0, 1)), false),
        (one(fin(3), fin(6), rate(5, 2), p(1, 1), p(0, 1)), false),
        (one(fin(8), fin(2), rate(3, 1), p(3, 2), p(-1, 1)), false),
        (two(fin(4), rate(4, 1), p(-1, 1), p(-1, 1), rate(4, 1), p(-1, 1), p(-1, 1)), true),
        (two(fin(3), rate(6, 1), p(0, 1), p(1, 1), rate(2, 1), p(1, 1), p(1, 1)), false),
        (two(fin(5), rate(5, 2), p(-1, 2), p(0, 1), ExtendedRate::Infinity, p(0, 1), p(0, 1)), false),
    ]
}

fn criterion_inequalities() -> Outcome {
    let cfg = GrussConfig::default();
    let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let mut sampler = FunctionSampler::new(20_240_601);
    let pairs: Vec<(Expr, Expr)> = (0..200).map(|_| (sampler.sample(), sampler.sample())).collect();
    let ops: Vec<(OperatorDescriptor, bool)> =
        inequality_operators().into_iter().map(|(s, lin)| (s.descriptor().unwrap(), lin)).collect();
    ensure(ops.iter().filter(|o| !o.1).count() >= 5, || "too few non-linear-reproducing operators".into())?;
    let results: Vec<Result<(f64, f64, usize), String>> = pairs
        .par_iter()
        .map(|(fe, ge)| {
            let f = fe.clone().into_function().map_err(|e| e.to_string())?;
            let g = ge.clone().into_function().map_err(|e| e.to_string())?;
            let pf = PreparedFunction::new(&f, cfg.modulus_grid).map_err(|e| e.to_string())?;
            let pg = PreparedFunction::new(&g, cfg.modulus_grid).map_err(|e| e.to_string())?;
            let (mut min1, mut min2, mut n) = (f64::INFINITY, f64::INFINITY, 0);
            for (op, linear) in &ops {
                let kinds: &[BoundKind] = if *linear { &[BoundKind::Cg1] } else { &[BoundKind::Cg1, BoundKind::Cg2] };
                for &x in &xs {
                    let evs = bounds_prepared(op, &pf, &pg, x, kinds, &cfg).map_err(|e| format!("{op}, {fe}, {ge}: {e}"))?;
                    let c1 = &evs[0];
                    min1 = min1.min(c1.slack);
                    ensure(c1.slack >= -1e-9, || format!("CG1 slack {} for {op}, f={fe}, g={ge}, x={x}", c1.slack))?;
                    if let Some(c2) = evs.get(1) {
                        min2 = min2.min(c2.slack);
                        ensure(c2.slack >= -1e-9, || format!("CG2 slack {} for {op}, f={fe}, g={ge}, x={x}", c2.slack))?;
                        ensure(c2.rhs <= c1.rhs + 1e-12, || format!("CG2 rhs above CG1 for {op} at x={x}"))?;
                    }
                    n += evs.len();
                }
            }
            Ok((min1, min2, n))
        })
        .collect();
    let (mut min1, mut min2, mut total) = (f64::INFINITY, f64::INFINITY, 0);
    for r in results {
        let (a, b, n) = r?;
        min1 = min1.min(a);
        min2 = min2.min(b);
        total += n;
    }
    Ok(format!("{total} bound evaluations, min CG1 slack {min1:.3e}, min CG2 slack {min2:.3e}"))
}

fn criterion_t11() -> Outcome {
    let reg = Registry::builtin();
    let mut specs = exactness_grid();
    for row in reg.rows() {
        for inst in &row.instances {
            specs.push(row.spec(inst).map_err(|e| e.to_string())?);
        }
    }
    let probes: Vec<BigRational> = (0..=6).map(|k| rational(k, 6)).collect();
    for spec in &specs {
        let op = spec.descriptor().map_err(|e| e.to_string())?;
        let exact = t11_exact(&op).map_err(|e| e.to_string())?;
        ensure(exact.degree().unwrap_or(0) <= 2, || format!("{op}: T11 degree above 2"))?;
        // both sides are quadratics, so agreement at three or more points is identity
        for x in &probes {
            let m = moments_in::<BigRational>(spec, x).map_err(|e| e.to_string())?;
            ensure(m.t11 == &m.second - &m.first * &m.first, || format!("{op}: t11 != second - first^2"))?;
            ensure(m.t11 == exact.eval(x), || format!("{op}: t11 differs from oracle at {x}"))?;
        }
        let quad = RationalPolynomial::from_coeffs((0..3).map(|k| exact.coeff(k)).collect());
        ensure(quad == exact, || format!("{op}: oracle T11 not quadratic"))?;
    }
    Ok(format!("{} rational descriptors", specs.len()))
}

fn check_majorant(name: &str, f: &Function, n: usize) -> Result<(), String> {
    let curve = modulus_curve(&GridFunction::from_function(f, n).map_err(|e| e.to_string())?);
    let w = curve.values();
    let maj = least_concave_majorant(&curve);
    let m: Vec<f64> = (0..=n).map(|j| maj.eval(curve.t(j)).unwrap()).collect();
    ensure(m[0] == 0.0, || format!("{name}: majorant(0) = {}", m[0]))?;
    for j in 0..=n {
        ensure(m[j] >= w[j], || format!("{name}: not a majorant at j={j}"))?;
        ensure(m[j] <= 2.0 * w[j] + 1e-12, || format!("{name}: above 2w at j={j}"))?;
        if j > 0 && j < n {
            ensure(m[j] + 1e-12 >= 0.5 * (m[j - 1] + m[j + 1]), || format!("{name}: not concave at j={j}"))?;
        }
    }
    for j in maj.vertex_indices() {
        ensure(m[j] == w[j], || format!("{name}: vertex {j} off the curve"))?;
    }
    Ok(())
}

fn criterion_modulus() -> Outcome {
    let n = DEFAULT_GRID;
    let mut sampler = FunctionSampler::new(7);
    let mut fs = vec![
        ("e1", Function::e1()),
        ("|x-1/2|", Function::new(|t| (t - 0.5).abs())),
        ("x^2", Function::e2()),
    ];
    for _ in 0..20 {
        fs.push(("random piecewise-linear", sampler.grid_piecewise_linear(16).to_function()));
    }
    for (name, f) in &fs {
        check_majorant(name, f, n)?;
    }
    let curve = modulus_curve(&GridFunction::from_function(&Function::new(|t| (t - 0.5).abs()), n).unwrap());
    let worst = (0..=n).map(|j| (curve.values()[j] - curve.t(j).min(0.5)).abs()).fold(0.0, f64::max);
    ensure(worst <= 2.0 / n as f64, || format!("|x-1/2| modulus off by {worst}"))?;
    Ok(format!("{} functions at N={n}, |x-1/2| max deviation {worst:.1e}", fs.len()))
}

fn criterion_classical() -> Outcome {
    let rule = CompositeRule::default();
    let mut sampler = FunctionSampler::new(99);
    let grid = 32;
    let mut worst_sign: f64 = 0.0;
    for synchronous in [true, false] {
        for i in 0..50 {
            let up = i % 2 == 0;
            let f = sampler.monotone_piecewise_linear(grid, up);
            let g = sampler.monotone_piecewise_linear(grid, up == synchronous);
            let p = sampler.nonnegative_weight(grid);
            let v = classical_chebyshev_check(&f.to_function(), &g.to_function(), &p.to_function(), &rule)
                .map_err(|e| e.to_string())?;
            let signed = if synchronous { v } else { -v };
            worst_sign = worst_sign.min(signed);
            ensure(signed >= -1e-10, || format!("sign law fails: synchronous={synchronous}, residual {v}, f={f}, g={g}, p={p}"))?;
        }
    }
    let mut min_slack = f64::INFINITY;
    for _ in 0..50 {
        let f = sampler.grid_piecewise_linear(grid);
        let g = sampler.grid_piecewise_linear(grid);
        let rb = RangeBounds::new(f.min(), f.max(), g.min(), g.max()).map_err(|e| e.to_string())?;
        let t = integral_chebyshev_functional(&f.to_function(), &g.to_function(), &rule).map_err(|e| e.to_string())?;
        let slack = classical_gruss_bound(&rb) - t.abs();
        min_slack = min_slack.min(slack);
        ensure(slack >= -1e-10, || format!("Grüss bound fails for f={f}, g={g}: slack {slack}"))?;
    }
    Ok(format!("100 weighted pairs (worst signed residual {worst_sign:.1e}), 50 Grüss pairs (min slack {min_slack:.3e})"))
}

fn run(number: u32, title: &str, budget: Option<Duration>, body: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|e| {
        Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let elapsed = start.elapsed();
    let outcome = match (outcome, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("exceeded runtime budget of {b:?}")),
        (o, _) => o,
    };
    let ok = outcome.is_ok();
    let detail = outcome.unwrap_or_else(|e| e);
    println!("criterion {number} {}: {title} ({:.1}s) {detail}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    ok
}

fn main() {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Outcome); 7] = [
        (1, "closed-form moments equal the exact oracle", Some(Duration::from_secs(30)), criterion_exactness),
        (2, "table reproduction with documented errata", None, criterion_tables),
        (3, "CG1 equality for Bernstein n=1, f=g=e1, x=1/2", None, criterion_sharpness),
        (4, "Chebyshev-Grüss inequality suite", Some(Duration::from_secs(300)), criterion_inequalities),
        (5, "T11 identity as exact polynomials", None, criterion_t11),
        (6, "modulus of continuity and least concave majorant", None, criterion_modulus),
        (7, "classical Chebyshev and Grüss inequalities", None, criterion_classical),
    ];
    let mut all = true;
    for (number, title, budget, body) in criteria {
        all &= run(number, title, budget, body);
    }
    println!(
        "criterion 8 {}: no experimental numbers beyond the formulas; covered by criteria 1-7",
        if all { "PASS" } else { "FAIL" }
    );
    if !all {
        std::process::exit(1);
    }
}
