//! The subcommands, each producing a [`Report`] and a pass flag.

use std::path::Path;

use anyhow::{bail, Context, Result};
use bej_core::expr::{parse_expression, Expr};
use bej_core::families::FunctionSampler;
use bej_core::gruss::{
    classical_chebyshev_check, classical_gruss_bound, integral_chebyshev_functional, verify_inequality, BoundKind,
    GrussConfig, RangeBounds,
};
use bej_core::modulus::GridFunction;
use bej_core::moments::{moments_exact, operator_moments};
use bej_core::oracle::{central_moment_exact, t11_exact};
use bej_core::quadrature::CompositeRule;
use bej_core::scalar::rational;
use bej_core::tables::{oracle_value, Registry, Verdict};
use bej_core::{Function, QuadratureConfig};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::opspec::parse_op;
use crate::report::{num, Format, Report};

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Number of intervals of the x grid `{i / grid}`.
    pub grid: usize,
    pub modulus_grid: usize,
    pub nodes: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.grid == 0 || self.nodes == 0 || self.modulus_grid < 2 {
            bail!("--grid and --nodes must be positive and --modulus-grid at least 2");
        }
        if !(self.tol >= 0.0) {
            bail!("--tol must be a nonnegative number");
        }
        Ok(())
    }

    fn json(&self, extra: Value) -> Value {
        let mut v = json!({
            "grid": self.grid,
            "modulus_grid": self.modulus_grid,
            "nodes": self.nodes,
            "tol": self.tol,
            "seed": self.seed,
            "format": self.format.as_str(),
        });
        if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
            base.extend(more);
        }
        v
    }

    fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig { node_count: self.nodes, ..QuadratureConfig::default() }
    }

    fn x_grid(&self) -> Vec<BigRational> {
        (0..=self.grid).map(|i| rational(i as i64, self.grid as i64)).collect()
    }
}

pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

fn float(q: &BigRational) -> f64 {
    bej_core::scalar::rational_to_f64(q)
}

pub fn tables(cfg: &RunConfig, table: u32) -> Result<Outcome> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let info = reg.table_info(table)?;
    let rows = reg.table(table)?;
    let mut out = Vec::new();
    let mut flagged = Vec::new();
    let mut undocumented = 0;
    for row in &rows {
        let params = row.default_params();
        let rep = reg.reconcile(row)?;
        for &column in Registry::table_columns(table) {
            let Some(col) = rep.column(column) else { continue };
            if col.verdict == Verdict::Mismatch {
                flagged.push(format!("{}:{}", row.key, column.as_str()));
            }
            undocumented += usize::from(col.is_undocumented_mismatch());
            for x in cfg.x_grid() {
                let oracle = oracle_value(row, column, params, &x)?;
                let printed = row.value_exact(column, params, &x).ok();
                out.push(vec![
                    json!(row.key),
                    json!(row.notation),
                    json!(column.as_str()),
                    json!(row.describe_params(params)),
                    json!(x.to_string()),
                    json!(printed.as_ref().map_or("undefined".to_string(), |p| p.to_string())),
                    json!(oracle.to_string()),
                    num(float(&oracle)),
                    json!(printed.as_ref() == Some(&oracle)),
                    json!(col.verdict.to_string()),
                    json!(col.erratum.as_ref().map(|e| e.corrected.clone())),
                ]);
            }
        }
    }
    let report = Report {
        command: "tables",
        config: cfg.json(json!({ "table": table })),
        columns: vec![
            "key", "notation", "column", "params", "x", "printed", "oracle", "oracle_f64", "agrees", "verdict", "corrected",
        ],
        rows: out,
        summary: json!({
            "table": table,
            "title": info.title,
            "operators": rows.len(),
            "mismatches": flagged,
            "undocumented_mismatches": undocumented,
        }),
    };
    Ok(Outcome { report, passed: true })
}

pub fn reconcile(cfg: &RunConfig, table: Option<u32>, errata: Option<&Path>) -> Result<Outcome> {
    cfg.validate()?;
    let custom = match errata {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(Registry::with_errata(&text)?)
        }
        None => None,
    };
    let reg = custom.as_ref().unwrap_or_else(|| Registry::builtin());
    let rows: Vec<_> = match table {
        Some(n) => reg.table(n)?,
        None => reg.rows().iter().collect(),
    };
    let (mut matches, mut documented, mut undocumented, mut stale) = (0, 0, 0, 0);
    let mut out = Vec::new();
    for row in rows {
        let rep = reg.reconcile(row)?;
        for col in &rep.columns {
            match col.verdict {
                Verdict::Match => matches += 1,
                Verdict::Mismatch if col.is_documented() => documented += 1,
                Verdict::Mismatch => undocumented += 1,
            }
            stale += usize::from(col.is_stale_erratum());
            let status = if col.is_undocumented_mismatch() {
                "UNDOCUMENTED"
            } else if col.is_stale_erratum() {
                "STALE_ERRATUM"
            } else if col.verdict == Verdict::Mismatch {
                "DOCUMENTED"
            } else {
                "OK"
            };
            out.push(vec![
                json!(rep.key),
                json!(rep.table),
                json!(rep.t11_table),
                json!(col.column.as_str()),
                json!(col.printed),
                json!(col.verdict.to_string()),
                json!(status),
                num(col.max_abs_discrepancy),
                json!(col.mismatches.len()),
                json!(col.erratum.as_ref().map(|e| e.corrected.clone())),
                json!(col.erratum.as_ref().map(|e| e.corrected_matches)),
                json!(rep.closed_form_matches_oracle),
            ]);
        }
    }
    let report = Report {
        command: "reconcile",
        config: cfg.json(json!({ "table": table, "errata": errata.map(|p| p.display().to_string()) })),
        columns: vec![
            "key",
            "table",
            "t11_table",
            "column",
            "printed",
            "verdict",
            "status",
            "max_abs_discrepancy",
            "mismatch_points",
            "corrected",
            "corrected_matches",
            "closed_form_matches_oracle",
        ],
        rows: out,
        summary: json!({
            "match": matches,
            "documented_mismatches": documented,
            "undocumented_mismatches": undocumented,
            "stale_errata": stale,
            "passed": undocumented == 0,
        }),
    };
    Ok(Outcome { report, passed: undocumented == 0 })
}

pub fn moments(cfg: &RunConfig, op: &str) -> Result<Outcome> {
    cfg.validate()?;
    let parsed = parse_op(op)?;
    let q = cfg.quadrature();
    let exact = parsed.descriptor.is_exact();
    let oracle = if exact {
        Some([central_moment_exact(&parsed.descriptor, 1)?, central_moment_exact(&parsed.descriptor, 2)?, t11_exact(&parsed.descriptor)?])
    } else {
        None
    };
    let mut out = Vec::new();
    let mut all_agree = true;
    for x in cfg.x_grid() {
        let xf = float(&x);
        let (m, source) = operator_moments(&parsed.descriptor, xf, &q)?;
        let values = [m.first, m.second, m.t11];
        let oracle_at = oracle.as_ref().map(|p| p.iter().map(|poly| poly.eval(&x)).collect::<Vec<_>>());
        let agrees = match (&parsed.spec, &oracle_at) {
            (Some(spec), Some(o)) if exact => {
                let c = moments_exact(spec, &x)?;
                c.first == o[0] && c.second == o[1] && c.t11 == o[2]
            }
            (_, Some(o)) => values.iter().zip(o).all(|(v, w)| (v - float(w)).abs() <= cfg.tol),
            (_, None) => true,
        };
        all_agree &= agrees;
        let exact_cell = |k: usize| json!(oracle_at.as_ref().map(|o| o[k].to_string()));
        out.push(vec![
            json!(x.to_string()),
            num(m.first),
            num(m.second),
            num(m.t11),
            json!(source),
            exact_cell(0),
            exact_cell(1),
            exact_cell(2),
            json!(oracle_at.as_ref().map(|_| agrees)),
        ]);
    }
    let report = Report {
        command: "moments",
        config: cfg.json(json!({ "op": op })),
        columns: vec!["x", "first", "second", "t11", "source", "oracle_first", "oracle_second", "oracle_t11", "agrees"],
        rows: out,
        summary: json!({
            "operator": parsed.descriptor.to_string(),
            "exact": exact,
            "warnings": parsed.warnings,
            "all_agree": all_agree,
        }),
    };
    Ok(Outcome { report, passed: all_agree })
}

fn function(text: &str) -> Result<(Expr, Function)> {
    let e = parse_expression(text)?;
    let f = e.clone().into_function()?;
    Ok((e, f))
}

pub fn verify(cfg: &RunConfig, op: &str, f: Option<&str>, g: Option<&str>, kind: BoundKind) -> Result<Outcome> {
    cfg.validate()?;
    let parsed = parse_op(op)?;
    let mut sampler = FunctionSampler::new(cfg.seed);
    let mut pick = |text: Option<&str>| -> Result<(Expr, Function)> {
        match text {
            Some(t) => function(t),
            None => function(&sampler.sample().to_string()),
        }
    };
    let (fe, ff) = pick(f)?;
    let (ge, gf) = pick(g)?;
    let gcfg = GrussConfig { quadrature: cfg.quadrature(), modulus_grid: cfg.modulus_grid, tolerance: cfg.tol };
    let xs: Vec<f64> = cfg.x_grid().iter().map(float).collect();
    let rep = verify_inequality(&parsed.descriptor, &ff, &gf, &xs, kind, &gcfg)?;
    let out = rep
        .evaluations
        .iter()
        .map(|e| {
            vec![num(e.x), num(e.lhs), num(e.rhs), num(e.slack), json!(e.radicand.map(num)), json!(e.moment_source)]
        })
        .collect();
    let s = &rep.summary;
    let report = Report {
        command: "verify",
        config: cfg.json(json!({ "op": op, "f": fe.to_string(), "g": ge.to_string(), "bound": kind.to_string() })),
        columns: vec!["x", "lhs", "rhs", "slack", "radicand", "moment_source"],
        rows: out,
        summary: json!({
            "operator": rep.operator,
            "f": rep.f,
            "g": rep.g,
            "bound": kind.to_string(),
            "points": s.points,
            "min_slack": num(s.min_slack),
            "argmin_x": num(s.argmin_x),
            "tolerance": s.tolerance,
            "passed": s.passed,
        }),
    };
    Ok(Outcome { report, passed: s.passed })
}

pub fn classical(cfg: &RunConfig, f: &str, g: &str, p: &str) -> Result<Outcome> {
    cfg.validate()?;
    let (fe, ff) = function(f)?;
    let (ge, gf) = function(g)?;
    let (pe, pf) = function(p)?;
    let rule = CompositeRule::default();
    let residual = classical_chebyshev_check(&ff, &gf, &pf, &rule)?;
    let t = integral_chebyshev_functional(&ff, &gf, &rule)?;
    let fs = GridFunction::from_function(&ff, cfg.modulus_grid)?;
    let gs = GridFunction::from_function(&gf, cfg.modulus_grid)?;
    let rb = RangeBounds::new(fs.min(), fs.max(), gs.min(), gs.max())?;
    let bound = classical_gruss_bound(&rb);
    let slack = bound - t.abs();
    let passed = slack >= -cfg.tol;
    let rows = [
        ("weighted_chebyshev_residual", residual),
        ("chebyshev_functional", t),
        ("m", rb.m),
        ("M", rb.big_m),
        ("p", rb.p),
        ("P", rb.big_p),
        ("gruss_bound", bound),
        ("gruss_slack", slack),
    ]
    .into_iter()
    .map(|(k, v)| vec![json!(k), num(v)])
    .collect();
    let report = Report {
        command: "classical",
        config: cfg.json(json!({ "f": fe.to_string(), "g": ge.to_string(), "p": pe.to_string() })),
        columns: vec!["quantity", "value"],
        rows,
        summary: json!({
            "residual_sign": if residual > cfg.tol { "positive" } else if residual < -cfg.tol { "negative" } else { "zero" },
            "gruss_slack": num(slack),
            "passed": passed,
        }),
    };
    Ok(Outcome { report, passed })
}
