//! Chebyshev functional of an operator, the Chebyshev-Grüss bounds built
//! on the least concave majorant, and the classical integral inequalities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::{majorant_of, ConcaveMajorant, DEFAULT_GRID};
use crate::moments::{operator_moments, MomentSource};
use crate::operator::{apply, Function, OperatorDescriptor};
use crate::quadrature::{CompositeRule, QuadratureConfig};

/// Radicands below this are treated as a numerical inconsistency.
pub const NEGATIVE_MOMENT_TOLERANCE: f64 = 1e-12;
/// Slack below `-VERIFY_TOLERANCE` counts as a failed inequality.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundKind {
    /// Radicand is the second central moment.
    Cg1,
    /// Radicand is `H(e2; x) - H(e1; x)^2`.
    Cg2,
    ClassicalGruss,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundKind::Cg1 => "CG1",
            BoundKind::Cg2 => "CG2",
            BoundKind::ClassicalGruss => "CLASSICAL_GRUSS",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundEvaluation {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub bound_kind: BoundKind,
    /// Moment under the square root; absent for the classical bound.
    pub radicand: Option<f64>,
    pub moment_source: Option<MomentSource>,
}

/// Infimum and supremum of two functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeBounds {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub p: f64,
    #[serde(rename = "P")]
    pub big_p: f64,
}

impl RangeBounds {
    pub fn new(m: f64, big_m: f64, p: f64, big_p: f64) -> Result<Self> {
        if !(m <= big_m && p <= big_p) {
            return Err(Error::Precondition(format!("range bounds need m <= M and p <= P, got {m}, {big_m}, {p}, {big_p}")));
        }
        Ok(RangeBounds { m, big_m, p, big_p })
    }
}

#[derive(Debug, Clone)]
pub struct GrussConfig {
    pub quadrature: QuadratureConfig,
    /// Grid intervals for the modulus of continuity.
    pub modulus_grid: usize,
    pub tolerance: f64,
}

impl Default for GrussConfig {
    fn default() -> Self {
        GrussConfig { quadrature: QuadratureConfig::default(), modulus_grid: DEFAULT_GRID, tolerance: VERIFY_TOLERANCE }
    }
}

/// A function together with its majorant, so repeated bounds reuse it.
#[derive(Debug, Clone)]
pub struct PreparedFunction {
    pub function: Function,
    pub majorant: ConcaveMajorant,
}

impl PreparedFunction {
    pub fn new(f: &Function, modulus_grid: usize) -> Result<Self> {
        Ok(PreparedFunction { function: f.clone(), majorant: majorant_of(f, modulus_grid)? })
    }
}

/// `H(fg; x) - H(f; x) H(g; x)`.
pub fn chebyshev_functional(
    op: &OperatorDescriptor,
    f: &Function,
    g: &Function,
    x: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let fg = apply(op, &f.product(g), x, q)?;
    let hf = apply(op, f, x, q)?;
    let hg = apply(op, g, x, q)?;
    Ok(fg - hf * hg)
}

fn radicand(op: &OperatorDescriptor, x: f64, kind: BoundKind, q: &QuadratureConfig) -> Result<(f64, MomentSource)> {
    let (m, source) = operator_moments(op, x, q)?;
    let v = match kind {
        BoundKind::Cg1 => m.second,
        BoundKind::Cg2 => m.t11,
        BoundKind::ClassicalGruss => unreachable!("classical bound has no radicand"),
    };
    if v < -NEGATIVE_MOMENT_TOLERANCE {
        return Err(Error::NumericalConsistency(format!("{kind} radicand {v} is negative at x={x}")));
    }
    Ok((v.max(0.0), source))
}

/// Bound of the given kind at `x` for prepared functions.
pub fn bound_prepared(
    op: &OperatorDescriptor,
    f: &PreparedFunction,
    g: &PreparedFunction,
    x: f64,
    kind: BoundKind,
    cfg: &GrussConfig,
) -> Result<BoundEvaluation> {
    Ok(bounds_prepared(op, f, g, x, &[kind], cfg)?.remove(0))
}

/// Several bounds at `x` sharing one evaluation of the Chebyshev functional.
pub fn bounds_prepared(
    op: &OperatorDescriptor,
    f: &PreparedFunction,
    g: &PreparedFunction,
    x: f64,
    kinds: &[BoundKind],
    cfg: &GrussConfig,
) -> Result<Vec<BoundEvaluation>> {
    if kinds.contains(&BoundKind::ClassicalGruss) {
        return Err(Error::Precondition("use classical_gruss_bound for the classical bound".into()));
    }
    let lhs = chebyshev_functional(op, &f.function, &g.function, x, &cfg.quadrature)?.abs();
    kinds
        .iter()
        .map(|&kind| {
            let (rho, source) = radicand(op, x, kind, &cfg.quadrature)?;
            let t = 2.0 * rho.sqrt();
            let rhs = 0.25 * f.majorant.eval(t)? * g.majorant.eval(t)?;
            Ok(BoundEvaluation {
                x,
                lhs,
                rhs,
                slack: rhs - lhs,
                bound_kind: kind,
                radicand: Some(rho),
                moment_source: Some(source),
            })
        })
        .collect()
}

fn bound(op: &OperatorDescriptor, f: &Function, g: &Function, x: f64, kind: BoundKind, cfg: &GrussConfig) -> Result<BoundEvaluation> {
    let pf = PreparedFunction::new(f, cfg.modulus_grid)?;
    let pg = PreparedFunction::new(g, cfg.modulus_grid)?;
    bound_prepared(op, &pf, &pg, x, kind, cfg)
}

/// `|T(f,g;x)| <= 1/4 w~(f; 2 sqrt(mu2)) w~(g; 2 sqrt(mu2))`.
pub fn bound_cg1(op: &OperatorDescriptor, f: &Function, g: &Function, x: f64, cfg: &GrussConfig) -> Result<BoundEvaluation> {
    bound(op, f, g, x, BoundKind::Cg1, cfg)
}

/// As [`bound_cg1`] with radicand `T(e1, e1; x)`.
pub fn bound_cg2(op: &OperatorDescriptor, f: &Function, g: &Function, x: f64, cfg: &GrussConfig) -> Result<BoundEvaluation> {
    bound(op, f, g, x, BoundKind::Cg2, cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationSummary {
    pub points: usize,
    pub min_slack: f64,
    pub argmin_x: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub operator: String,
    pub f: String,
    pub g: String,
    pub bound_kind: BoundKind,
    pub evaluations: Vec<BoundEvaluation>,
    pub summary: VerificationSummary,
}

/// Evaluates a bound at every grid point and summarises the slack.
pub fn verify_inequality(
    op: &OperatorDescriptor,
    f: &Function,
    g: &Function,
    x_grid: &[f64],
    kind: BoundKind,
    cfg: &GrussConfig,
) -> Result<VerificationReport> {
    let pf = PreparedFunction::new(f, cfg.modulus_grid)?;
    let pg = PreparedFunction::new(g, cfg.modulus_grid)?;
    let evaluations = x_grid
        .iter()
        .map(|&x| bound_prepared(op, &pf, &pg, x, kind, cfg))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&evaluations, cfg.tolerance);
    Ok(VerificationReport {
        operator: op.to_string(),
        f: f.name().unwrap_or("f").to_string(),
        g: g.name().unwrap_or("g").to_string(),
        bound_kind: kind,
        evaluations,
        summary,
    })
}

pub fn summarize(evaluations: &[BoundEvaluation], tolerance: f64) -> VerificationSummary {
    let worst = evaluations.iter().min_by(|a, b| a.slack.total_cmp(&b.slack));
    let (min_slack, argmin_x) = worst.map_or((f64::INFINITY, f64::NAN), |e| (e.slack, e.x));
    VerificationSummary {
        points: evaluations.len(),
        min_slack,
        argmin_x,
        tolerance,
        passed: evaluations.iter().all(|e| e.slack >= -tolerance),
    }
}

/// `(M - m)(P - p) / 4`.
pub fn classical_gruss_bound(rb: &RangeBounds) -> f64 {
    0.25 * (rb.big_m - rb.m) * (rb.big_p - rb.p)
}

/// `int p * int p f g - int p f * int p g` over [0, 1].
pub fn classical_chebyshev_check(f: &Function, g: &Function, p: &Function, rule: &CompositeRule) -> Result<f64> {
    let mut bad = None;
    let w = |t: f64| {
        let v = p.eval(t);
        if v < -NEGATIVE_MOMENT_TOLERANCE || !v.is_finite() {
            bad.get_or_insert(t);
        }
        v
    };
    let ip = rule.integrate(w);
    if let Some(t) = bad {
        return Err(Error::Precondition(format!("weight p is negative or non-finite at t={t}")));
    }
    let ipfg = rule.integrate(|t| p.eval(t) * f.eval(t) * g.eval(t));
    let ipf = rule.integrate(|t| p.eval(t) * f.eval(t));
    let ipg = rule.integrate(|t| p.eval(t) * g.eval(t));
    let out = ip * ipfg - ipf * ipg;
    if !out.is_finite() {
        return Err(Error::Evaluation("non-finite integral".into()));
    }
    Ok(out)
}

/// Integral Chebyshev functional with unit weight, `int fg - int f int g`.
pub fn integral_chebyshev_functional(f: &Function, g: &Function, rule: &CompositeRule) -> Result<f64> {
    classical_chebyshev_check(f, g, &Function::e0(), rule)
}
