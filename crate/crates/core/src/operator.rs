//! Operator descriptors for the Bernstein / Euler-Jacobi Beta family and
//! their numeric action on continuous functions on [0, 1].

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{GaussJacobiRule, QuadratureConfig};
use crate::scalar::Param;

/// A Bernstein degree, possibly infinite (the identity operator).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtendedIndex {
    Finite(u32),
    Infinity,
}

impl ExtendedIndex {
    pub fn finite(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParameterDomain("index must be >= 1".into()));
        }
        Ok(ExtendedIndex::Finite(n))
    }

    pub fn value(&self) -> Option<u32> {
        match self {
            ExtendedIndex::Finite(n) => Some(*n),
            ExtendedIndex::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedIndex::Infinity)
    }
}

impl fmt::Display for ExtendedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedIndex::Finite(n) => write!(f, "{n}"),
            ExtendedIndex::Infinity => f.write_str("inf"),
        }
    }
}

/// A Beta-operator rate, possibly infinite (the identity operator).
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedRate {
    Finite(Param),
    Infinity,
}

impl ExtendedRate {
    pub fn value(&self) -> Option<&Param> {
        match self {
            ExtendedRate::Finite(p) => Some(p),
            ExtendedRate::Infinity => None,
        }
    }
}

impl From<Param> for ExtendedRate {
    fn from(p: Param) -> Self {
        ExtendedRate::Finite(p)
    }
}

impl fmt::Display for ExtendedRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRate::Finite(p) => write!(f, "{p}"),
            ExtendedRate::Infinity => f.write_str("inf"),
        }
    }
}

/// Positive linear operator on C[0,1], built from Bernstein and
/// Euler-Jacobi Beta factors.
///
/// `Compose` lists factors outermost first. Use [`OperatorDescriptor::compose`]
/// to build one; it flattens nested compositions and drops identities.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorDescriptor {
    Bernstein(u32),
    EulerJacobiBeta { r: Param, a: Param, b: Param },
    Identity,
    Compose(Vec<OperatorDescriptor>),
}

impl OperatorDescriptor {
    pub fn bernstein(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParameterDomain("Bernstein degree must be >= 1".into()));
        }
        Ok(OperatorDescriptor::Bernstein(n))
    }

    pub fn beta(r: Param, a: Param, b: Param) -> Result<Self> {
        check_beta_params(&r, &a, &b)?;
        Ok(OperatorDescriptor::EulerJacobiBeta { r, a, b })
    }

    pub fn compose(factors: impl IntoIterator<Item = OperatorDescriptor>) -> Self {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                OperatorDescriptor::Identity => {}
                OperatorDescriptor::Compose(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => OperatorDescriptor::Identity,
            1 => flat.pop().unwrap(),
            _ => OperatorDescriptor::Compose(flat),
        }
    }

    /// Non-identity factors, outermost first.
    pub fn factors(&self) -> Vec<&OperatorDescriptor> {
        match self {
            OperatorDescriptor::Identity => Vec::new(),
            OperatorDescriptor::Compose(fs) => fs.iter().flat_map(|f| f.factors()).collect(),
            other => vec![other],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorDescriptor::Bernstein(0) => {
                Err(Error::ParameterDomain("Bernstein degree must be >= 1".into()))
            }
            OperatorDescriptor::Bernstein(_) | OperatorDescriptor::Identity => Ok(()),
            OperatorDescriptor::EulerJacobiBeta { r, a, b } => check_beta_params(r, a, b),
            OperatorDescriptor::Compose(fs) => {
                if fs.is_empty() {
                    return Err(Error::InternalInvariant("empty composition".into()));
                }
                for f in fs {
                    if matches!(f, OperatorDescriptor::Compose(_)) {
                        return Err(Error::InternalInvariant("nested composition".into()));
                    }
                    f.validate()?;
                }
                Ok(())
            }
        }
    }

    pub fn beta_factor_count(&self) -> usize {
        self.factors()
            .iter()
            .filter(|f| matches!(f, OperatorDescriptor::EulerJacobiBeta { .. }))
            .count()
    }

    /// True when every numeric parameter is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.factors().iter().all(|f| match f {
            OperatorDescriptor::EulerJacobiBeta { r, a, b } => {
                r.is_exact() && a.is_exact() && b.is_exact()
            }
            _ => true,
        })
    }
}

impl fmt::Display for OperatorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorDescriptor::Bernstein(n) => write!(f, "B_{n}"),
            OperatorDescriptor::EulerJacobiBeta { r, a, b } => write!(f, "Beta_{r}^({a},{b})"),
            OperatorDescriptor::Identity => f.write_str("Id"),
            OperatorDescriptor::Compose(fs) => {
                for (i, factor) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" o ")?;
                    }
                    write!(f, "{factor}")?;
                }
                Ok(())
            }
        }
    }
}

fn check_beta_params(r: &Param, a: &Param, b: &Param) -> Result<()> {
    let rv = r.to_f64();
    if !(rv > 0.0) || !rv.is_finite() {
        return Err(Error::ParameterDomain(format!("Beta rate r={r} must be finite and > 0")));
    }
    for (name, p) in [("a", a), ("b", b)] {
        let v = p.to_f64();
        if !(v >= -1.0) || !v.is_finite() {
            return Err(Error::ParameterDomain(format!("Jacobi parameter {name}={p} must be >= -1")));
        }
    }
    Ok(())
}

/// Parameters of the type I composition `B_m o Beta_r^{a,b} o B_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bej1Spec {
    pub m: ExtendedIndex,
    pub n: ExtendedIndex,
    pub r: ExtendedRate,
    pub a: Param,
    pub b: Param,
}

impl Bej1Spec {
    pub fn new(
        m: ExtendedIndex,
        n: ExtendedIndex,
        r: ExtendedRate,
        a: Param,
        b: Param,
    ) -> Result<Self> {
        let spec = Bej1Spec { m, n, r, a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for idx in [self.m, self.n] {
            if idx == ExtendedIndex::Finite(0) {
                return Err(Error::ParameterDomain("index must be >= 1".into()));
            }
        }
        if let ExtendedRate::Finite(r) = &self.r {
            check_beta_params(r, &self.a, &self.b)?;
        }
        Ok(())
    }

    /// Indices equal to 1 are accepted but fall outside the `n, m > 1` range
    /// the moment formulas were derived for.
    pub fn warnings(&self) -> Vec<String> {
        [("m", self.m), ("n", self.n)]
            .iter()
            .filter(|(_, idx)| *idx == ExtendedIndex::Finite(1))
            .map(|(name, _)| format!("{name}=1 is below the documented range {name}>1"))
            .collect()
    }
}

/// Parameters of the type II composition `Beta_s^{c,d} o B_n o Beta_r^{a,b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bej2Spec {
    pub n: ExtendedIndex,
    pub s: ExtendedRate,
    pub c: Param,
    pub d: Param,
    pub r: ExtendedRate,
    pub a: Param,
    pub b: Param,
}

impl Bej2Spec {
    pub fn new(
        n: ExtendedIndex,
        s: ExtendedRate,
        c: Param,
        d: Param,
        r: ExtendedRate,
        a: Param,
        b: Param,
    ) -> Result<Self> {
        let spec = Bej2Spec { n, s, c, d, r, a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == ExtendedIndex::Finite(0) {
            return Err(Error::ParameterDomain("index must be >= 1".into()));
        }
        if let ExtendedRate::Finite(s) = &self.s {
            check_beta_params(s, &self.c, &self.d)?;
        }
        if let ExtendedRate::Finite(r) = &self.r {
            check_beta_params(r, &self.a, &self.b)?;
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.n == ExtendedIndex::Finite(1) {
            vec!["n=1 is below the documented range n>1".into()]
        } else {
            Vec::new()
        }
    }
}

/// Either family, for code that handles both.
#[derive(Debug, Clone, PartialEq)]
pub enum BejSpec {
    TypeI(Bej1Spec),
    TypeII(Bej2Spec),
}

impl BejSpec {
    pub fn descriptor(&self) -> Result<OperatorDescriptor> {
        match self {
            BejSpec::TypeI(s) => make_bej1(s),
            BejSpec::TypeII(s) => make_bej2(s),
        }
    }
}

fn bernstein_factor(idx: ExtendedIndex) -> Result<OperatorDescriptor> {
    match idx {
        ExtendedIndex::Finite(n) => OperatorDescriptor::bernstein(n),
        ExtendedIndex::Infinity => Ok(OperatorDescriptor::Identity),
    }
}

fn beta_factor(r: &ExtendedRate, a: &Param, b: &Param) -> Result<OperatorDescriptor> {
    match r {
        ExtendedRate::Finite(r) => OperatorDescriptor::beta(r.clone(), a.clone(), b.clone()),
        ExtendedRate::Infinity => Ok(OperatorDescriptor::Identity),
    }
}

pub fn make_bej1(spec: &Bej1Spec) -> Result<OperatorDescriptor> {
    spec.validate()?;
    Ok(OperatorDescriptor::compose([
        bernstein_factor(spec.m)?,
        beta_factor(&spec.r, &spec.a, &spec.b)?,
        bernstein_factor(spec.n)?,
    ]))
}

pub fn make_bej2(spec: &Bej2Spec) -> Result<OperatorDescriptor> {
    spec.validate()?;
    Ok(OperatorDescriptor::compose([
        beta_factor(&spec.s, &spec.c, &spec.d)?,
        bernstein_factor(spec.n)?,
        beta_factor(&spec.r, &spec.a, &spec.b)?,
    ]))
}

/// A real function on [0, 1] that operators act on.
#[derive(Clone)]
pub struct Function {
    name: Option<String>,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Function {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Function { name: None, eval: Arc::new(f) }
    }

    pub fn named(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Function { name: Some(name.into()), eval: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        Function::named(format!("{c}"), move |_| c)
    }

    /// The monomial `t^k`.
    pub fn monomial(k: i32) -> Self {
        Function::named(format!("e{k}"), move |t| t.powi(k))
    }

    pub fn e0() -> Self {
        Function::monomial(0)
    }

    pub fn e1() -> Self {
        Function::monomial(1)
    }

    pub fn e2() -> Self {
        Function::monomial(2)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluates and rejects non-finite results.
    pub fn try_eval(&self, x: f64) -> Result<f64> {
        let v = (self.eval)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!(
                "{} is not finite at x={x}",
                self.name().unwrap_or("function")
            )))
        }
    }

    pub fn product(&self, other: &Function) -> Function {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let name = match (self.name(), other.name()) {
            (Some(a), Some(b)) => Some(format!("({a})*({b})")),
            _ => None,
        };
        Function { name, eval: Arc::new(move |t| f(t) * g(t)) }
    }

    /// `alpha * f + beta`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Function {
        let f = self.eval.clone();
        Function { name: None, eval: Arc::new(move |t| alpha * f(t) + beta) }
    }
}

impl fmt::Debug for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Function").field("name", &self.name).finish()
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x={x} is outside [0, 1]")))
    }
}

/// `B_n(f; x)` by de Casteljau on the samples `f(k/n)`.
pub fn bernstein_apply(n: u32, f: &Function, x: f64) -> Result<f64> {
    check_unit(x)?;
    if n == 0 {
        return Err(Error::ParameterDomain("Bernstein degree must be >= 1".into()));
    }
    let values = (0..=n)
        .map(|k| f.try_eval(k as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(de_casteljau(values, x))
}

pub(crate) fn de_casteljau(mut c: Vec<f64>, x: f64) -> f64 {
    for level in (1..c.len()).rev() {
        for k in 0..level {
            c[k] += x * (c[k + 1] - c[k]);
        }
    }
    c[0]
}

/// `Beta_r^{a,b}(f; x)`.
pub fn beta_apply(
    r: f64,
    a: f64,
    b: f64,
    f: &Function,
    x: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let op = OperatorDescriptor::beta(Param::Float(r), Param::Float(a), Param::Float(b))?;
    apply(&op, f, x, q)
}

/// Applies `op` to `f` at `x`.
///
/// Factors are evaluated innermost first by point sampling. A Beta factor
/// sitting directly on a Bernstein factor is applied in closed form to the
/// Bernstein coefficients; any other Beta factor integrates its argument
/// with a Gauss-Jacobi rule.
pub fn apply(op: &OperatorDescriptor, f: &Function, x: f64, q: &QuadratureConfig) -> Result<f64> {
    check_unit(x)?;
    q.validate()?;
    op.validate()?;
    let factors: Vec<Factor> = op.factors().into_iter().map(Factor::from).collect();
    eval_chain(&factors, f, x, q)
}

#[derive(Debug, Clone, Copy)]
enum Factor {
    Bernstein(u32),
    Beta { r: f64, a: f64, b: f64 },
}

impl From<&OperatorDescriptor> for Factor {
    fn from(d: &OperatorDescriptor) -> Self {
        match d {
            OperatorDescriptor::Bernstein(n) => Factor::Bernstein(*n),
            OperatorDescriptor::EulerJacobiBeta { r, a, b } => Factor::Beta {
                r: r.to_f64(),
                a: a.to_f64(),
                b: b.to_f64(),
            },
            _ => unreachable!("factors() yields only Bernstein and Beta"),
        }
    }
}

fn eval_chain(factors: &[Factor], f: &Function, x: f64, q: &QuadratureConfig) -> Result<f64> {
    let Some((outer, rest)) = factors.split_first() else {
        return f.try_eval(x);
    };
    match *outer {
        Factor::Bernstein(n) => {
            let values = bernstein_samples(n, rest, f, q)?;
            Ok(de_casteljau(values, x))
        }
        Factor::Beta { r, a, b } => {
            let alpha = r * x + a;
            let beta = r * (1.0 - x) + b;
            if let Some((Factor::Bernstein(n), inner)) = rest.split_first() {
                let coeffs = bernstein_samples(*n, inner, f, q)?;
                return Ok(beta_on_bernstein(&coeffs, alpha, beta));
            }
            if alpha + 1.0 <= q.absolute_tolerance {
                return eval_chain(rest, f, 0.0, q);
            }
            if beta + 1.0 <= q.absolute_tolerance {
                return eval_chain(rest, f, 1.0, q);
            }
            let rule = cached_rule(q.node_count, alpha, beta)?;
            rule.integrate(|t| eval_chain(rest, f, t, q))
        }
    }
}

fn bernstein_samples(n: u32, rest: &[Factor], f: &Function, q: &QuadratureConfig) -> Result<Vec<f64>> {
    (0..=n)
        .map(|k| eval_chain(rest, f, k as f64 / n as f64, q))
        .collect()
}

/// Beta image of the Bernstein polynomial with coefficients `c`, evaluated
/// where the kernel exponents are `alpha`, `beta`.
///
/// The image of each basis polynomial is a beta-binomial probability, so the
/// result is a convex combination of the coefficients.
pub(crate) fn beta_on_bernstein(c: &[f64], alpha: f64, beta: f64) -> f64 {
    let n = c.len() - 1;
    let total = alpha + beta + 2.0;
    let mut acc = 0.0;
    let mut mass = 0.0;
    let mut binom = 1.0;
    for (k, &ck) in c.iter().enumerate() {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        let mut w = binom;
        for i in 0..k {
            w *= (alpha + 1.0 + i as f64) / (total + i as f64);
        }
        for j in 0..n - k {
            w *= (beta + 1.0 + j as f64) / (total + (k + j) as f64);
        }
        acc += w * ck;
        mass += w;
    }
    acc / mass
}

thread_local! {
    static RULES: RefCell<HashMap<(usize, u64, u64), Rc<GaussJacobiRule>>> =
        RefCell::new(HashMap::new());
}

fn cached_rule(nodes: usize, alpha: f64, beta: f64) -> Result<Rc<GaussJacobiRule>> {
    let key = (nodes, alpha.to_bits(), beta.to_bits());
    if let Some(rule) = RULES.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(rule);
    }
    let rule = Rc::new(GaussJacobiRule::new(nodes, alpha, beta)?);
    RULES.with(|c| {
        let mut cache = c.borrow_mut();
        if cache.len() > 4096 {
            cache.clear();
        }
        cache.insert(key, rule.clone());
    });
    Ok(rule)
}
