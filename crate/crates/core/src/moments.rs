//! Closed-form first and second central moments of both BEJ families.
//!
//! Every formula is generic over [`Field`], so the same code gives `f64`
//! values and exact rationals. Infinite Bernstein indices enter through
//! `u = 1/m`, `v = 1/n` (see [`Bej1LimitForm`], [`Bej2LimitForm`]); an
//! infinite Beta rate drops that factor and the family degenerates to a
//! smaller composition.

use num_rational::BigRational;

use crate::error::Result;
use crate::operator::{
    apply, Bej1Spec, Bej2Spec, BejSpec, ExtendedIndex, ExtendedRate, Function, OperatorDescriptor,
};
use crate::oracle::{central_moment_exact, t11_exact};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{Field, Param};

/// First and second central moments at one point, and their difference
/// `T(e1, e1; x) = second - first^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments<T> {
    pub first: T,
    pub second: T,
    pub t11: T,
}

impl<T: Field> Moments<T> {
    fn new(first: T, second: T) -> Self {
        let t11 = second.clone() - first.clone() * first.clone();
        Moments { first, second, t11 }
    }
}

fn c<T: Field>(v: i64) -> T {
    T::from_i64(v)
}

fn inv_index<T: Field>(i: ExtendedIndex) -> T {
    match i {
        ExtendedIndex::Finite(n) => T::one() / c(n as i64),
        ExtendedIndex::Infinity => T::zero(),
    }
}

fn rate<T: Field>(r: &ExtendedRate) -> Result<Option<T>> {
    r.value().map(T::from_param).transpose()
}

/// Second central moment of `B_m o Beta_r^{a,b} o B_n` with `u = 1/m` and
/// `v = 1/n` as free variables. It is affine in each of `u` and `v`.
#[derive(Debug, Clone)]
pub struct Bej1LimitForm<T> {
    /// `None` for `r = inf`.
    r: Option<T>,
    a: T,
    b: T,
}

impl<T: Field> Bej1LimitForm<T> {
    pub fn new(r: &ExtendedRate, a: &Param, b: &Param) -> Result<Self> {
        Ok(Bej1LimitForm { r: rate(r)?, a: T::from_param(a)?, b: T::from_param(b)? })
    }

    pub fn eval(&self, u: &T, v: &T, x: &T) -> T {
        let (a, b) = (self.a.clone(), self.b.clone());
        let xx = x.clone() * (T::one() - x.clone());
        let Some(r) = self.r.clone() else {
            return xx * (u.clone() + v.clone() - u.clone() * v.clone());
        };
        let w = u.clone() * v.clone() - u.clone() - v.clone();
        let r2w = r.clone() * r.clone() * w;
        let big_a = a.clone() * a.clone() + b.clone() * b.clone() + c::<T>(2) * a.clone() * b.clone()
            + c::<T>(5) * a.clone()
            + c::<T>(5) * b.clone()
            + c(6)
            - r.clone();
        let big_b = c::<T>(2) * a.clone() * a.clone() + c::<T>(2) * a.clone() * b.clone()
            + c::<T>(8) * a.clone()
            + c::<T>(2) * b.clone()
            + c(6)
            - r.clone();
        let quad = big_a + r2w.clone();
        let lin = big_b + r2w + r.clone() * (a.clone() - b.clone()) * v.clone();
        let cst = (a.clone() + c(1)) * (a.clone() + c(2))
            + v.clone() * (r.clone() * (a.clone() + c(1)) + a.clone() * b.clone() + a.clone() + b.clone() + c(1));
        let den = (r.clone() + a.clone() + b.clone() + c(2)) * (r + a + b + c(3));
        (quad * x.clone() * x.clone() - lin * x.clone() + cst) / den
    }
}

/// Second central moment of `Beta_s^{c,d} o B_n o Beta_r^{a,b}` with both
/// rates finite and `v = 1/n` as a free variable.
#[derive(Debug, Clone)]
pub struct Bej2LimitForm<T> {
    s: T,
    c: T,
    d: T,
    r: T,
    a: T,
    b: T,
}

impl<T: Field> Bej2LimitForm<T> {
    pub fn new(s: &Param, cc: &Param, d: &Param, r: &Param, a: &Param, b: &Param) -> Result<Self> {
        Ok(Bej2LimitForm {
            s: T::from_param(s)?,
            c: T::from_param(cc)?,
            d: T::from_param(d)?,
            r: T::from_param(r)?,
            a: T::from_param(a)?,
            b: T::from_param(b)?,
        })
    }

    pub fn eval(&self, v: &T, x: &T) -> T {
        let Bej2LimitForm { s, c: cc, d, r, a, b } = self.clone();
        let x = x.clone();
        let two = c::<T>(2);
        let sx = s.clone() * x.clone() + cc.clone() + c(1);
        let sx2 = sx.clone() * (s.clone() * x.clone() + cc.clone() + c(2));
        let r2 = r.clone() + a.clone() + b.clone() + c(2);
        let r3 = r.clone() + a.clone() + b.clone() + c(3);
        let t2 = s.clone() + cc.clone() + d.clone() + c(2);
        let t3 = s.clone() + cc.clone() + d.clone() + c(3);
        let ap = a.clone() * a.clone() + b.clone() * b.clone() + two.clone() * a.clone() * b.clone()
            + c::<T>(5) * a.clone()
            + c::<T>(5) * b.clone()
            + c(6)
            - r.clone();
        let bp = two.clone() * a.clone() * b.clone() + two.clone() * a.clone() * a.clone()
            + c::<T>(8) * a.clone()
            + two.clone() * b.clone()
            + c(6)
            - r.clone();
        let cp = cc.clone() * cc.clone() + d.clone() * d.clone() + two.clone() * cc.clone() * d.clone()
            + c::<T>(5) * cc.clone()
            + c::<T>(5) * d.clone()
            + c(6)
            - s.clone();
        let dp = two.clone() * cc.clone() * d.clone() + two.clone() * cc.clone() * cc.clone()
            + c::<T>(8) * cc.clone()
            + two.clone() * d.clone()
            + c(6)
            - s;
        let beta_s = t2.clone() * t3.clone();
        let one_v = T::one() - v.clone();

        let mut acc = one_v * ap.clone() * sx2.clone() / (r2.clone() * r3.clone() * beta_s.clone());
        acc = acc + (v.clone() * ap - bp) * sx.clone() / (r2.clone() * r3.clone() * t2.clone());
        acc = acc + (a.clone() * a.clone() + c::<T>(3) * a.clone() + c(2)) / (r2.clone() * r3);
        acc = acc + v.clone() * sx2.clone() / beta_s.clone();
        acc = acc - v.clone() * sx.clone() / t2.clone();
        acc = acc - cp * x.clone() * x.clone() / beta_s.clone();
        acc = acc + dp * x.clone() / beta_s.clone();
        acc = acc - (cc.clone() * cc.clone() + c::<T>(3) * cc + c(2)) / beta_s.clone();
        acc = acc + two.clone() * r.clone() * v.clone() * sx.clone() / (r2.clone() * t2.clone());
        acc = acc - two.clone() * r.clone() * v.clone() * sx2.clone() / (r2.clone() * beta_s.clone());
        acc = acc + two.clone() * r.clone() * sx2 / (r2.clone() * beta_s);
        acc = acc
            + two.clone() * (a.clone() + c(1) - x.clone() * (two.clone() * r + a.clone() + b + c(2))) * sx
                / (r2.clone() * t2);
        acc = acc - two.clone() * (a + c(1)) * x.clone() / r2;
        acc + two * x.clone() * x
    }
}

fn beta_first_moment<T: Field>(r: T, a: T, b: T, x: &T) -> T {
    (a.clone() + c(1) - x.clone() * (a.clone() + b.clone() + c(2))) / (r + a + b + c(2))
}

/// First central moment of a type I operator, generic over the field.
pub fn bej1_first_moment_in<T: Field>(spec: &Bej1Spec, x: &T) -> Result<T> {
    Ok(match rate::<T>(&spec.r)? {
        None => T::zero(),
        Some(r) => beta_first_moment(r, T::from_param(&spec.a)?, T::from_param(&spec.b)?, x),
    })
}

/// Second central moment of a type I operator, generic over the field.
pub fn bej1_second_moment_in<T: Field>(spec: &Bej1Spec, x: &T) -> Result<T> {
    let form = Bej1LimitForm::<T>::new(&spec.r, &spec.a, &spec.b)?;
    Ok(form.eval(&inv_index(spec.m), &inv_index(spec.n), x))
}

/// Type II specs with an infinite rate are type I operators.
fn bej2_degenerate(spec: &Bej2Spec) -> Option<Bej1Spec> {
    match (&spec.s, &spec.r) {
        (ExtendedRate::Infinity, _) => Some(Bej1Spec {
            m: spec.n,
            n: ExtendedIndex::Infinity,
            r: spec.r.clone(),
            a: spec.a.clone(),
            b: spec.b.clone(),
        }),
        (_, ExtendedRate::Infinity) => Some(Bej1Spec {
            m: ExtendedIndex::Infinity,
            n: spec.n,
            r: spec.s.clone(),
            a: spec.c.clone(),
            b: spec.d.clone(),
        }),
        _ => None,
    }
}

/// First central moment of a type II operator, generic over the field.
pub fn bej2_first_moment_in<T: Field>(spec: &Bej2Spec, x: &T) -> Result<T> {
    if let Some(deg) = bej2_degenerate(spec) {
        return bej1_first_moment_in(&deg, x);
    }
    let (s, r) = (rate::<T>(&spec.s)?.expect("finite"), rate::<T>(&spec.r)?.expect("finite"));
    let (cc, d) = (T::from_param(&spec.c)?, T::from_param(&spec.d)?);
    let (a, b) = (T::from_param(&spec.a)?, T::from_param(&spec.b)?);
    let r2 = r.clone() + a.clone() + b.clone() + c(2);
    let t2 = s + cc.clone() + d.clone() + c(2);
    let slope = r.clone() * (cc.clone() + d + c(2)) + (a.clone() + b + c(2)) * t2.clone();
    let offset = r * (cc + c(1)) + t2.clone() * (a + c(1));
    Ok((offset - x.clone() * slope) / (r2 * t2))
}

/// Second central moment of a type II operator, generic over the field.
pub fn bej2_second_moment_in<T: Field>(spec: &Bej2Spec, x: &T) -> Result<T> {
    if let Some(deg) = bej2_degenerate(spec) {
        return bej1_second_moment_in(&deg, x);
    }
    let (ExtendedRate::Finite(s), ExtendedRate::Finite(r)) = (&spec.s, &spec.r) else {
        unreachable!("degenerate specs handled above")
    };
    let form = Bej2LimitForm::<T>::new(s, &spec.c, &spec.d, r, &spec.a, &spec.b)?;
    Ok(form.eval(&inv_index(spec.n), x))
}

/// Both moments and `T(e1, e1; x)` for either family.
pub fn moments_in<T: Field>(spec: &BejSpec, x: &T) -> Result<Moments<T>> {
    Ok(match spec {
        BejSpec::TypeI(s) => Moments::new(bej1_first_moment_in(s, x)?, bej1_second_moment_in(s, x)?),
        BejSpec::TypeII(s) => Moments::new(bej2_first_moment_in(s, x)?, bej2_second_moment_in(s, x)?),
    })
}

pub fn moments_exact(spec: &BejSpec, x: &BigRational) -> Result<Moments<BigRational>> {
    moments_in(spec, x)
}

fn float<T>(r: Result<T>) -> T {
    r.expect("f64 evaluation has no failure modes")
}

pub fn bej1_first_moment(spec: &Bej1Spec, x: f64) -> f64 {
    float(bej1_first_moment_in(spec, &x))
}

pub fn bej1_second_moment(spec: &Bej1Spec, x: f64) -> f64 {
    float(bej1_second_moment_in(spec, &x))
}

pub fn bej2_first_moment(spec: &Bej2Spec, x: f64) -> f64 {
    float(bej2_first_moment_in(spec, &x))
}

pub fn bej2_second_moment(spec: &Bej2Spec, x: f64) -> f64 {
    float(bej2_second_moment_in(spec, &x))
}

/// `T(e1, e1; x)`: second moment minus the squared first moment.
pub fn t11_general(spec: &BejSpec, x: f64) -> f64 {
    float(moments_in(spec, &x)).t11
}

/// Recognises descriptors that belong to one of the two families.
///
/// Bernstein-only and Beta-only compositions are reported as type I;
/// `Beta o B_n o Beta` and `Beta o Beta` as type II.
pub fn classify(op: &OperatorDescriptor) -> Option<BejSpec> {
    use OperatorDescriptor::{Bernstein, EulerJacobiBeta};
    let inf = ExtendedIndex::Infinity;
    let no_beta = |m, n| {
        BejSpec::TypeI(Bej1Spec { m, n, r: ExtendedRate::Infinity, a: Param::int(0), b: Param::int(0) })
    };
    let bej1 = |m, n, r: &Param, a: &Param, b: &Param| {
        BejSpec::TypeI(Bej1Spec { m, n, r: ExtendedRate::Finite(r.clone()), a: a.clone(), b: b.clone() })
    };
    let bej2 = |s: (&Param, &Param, &Param), n, r: (&Param, &Param, &Param)| {
        BejSpec::TypeII(Bej2Spec {
            n,
            s: ExtendedRate::Finite(s.0.clone()),
            c: s.1.clone(),
            d: s.2.clone(),
            r: ExtendedRate::Finite(r.0.clone()),
            a: r.1.clone(),
            b: r.2.clone(),
        })
    };
    let fin = ExtendedIndex::Finite;
    match op.factors().as_slice() {
        [] => Some(no_beta(inf, inf)),
        [Bernstein(m)] => Some(no_beta(fin(*m), inf)),
        [Bernstein(m), Bernstein(n)] => Some(no_beta(fin(*m), fin(*n))),
        [EulerJacobiBeta { r, a, b }] => Some(bej1(inf, inf, r, a, b)),
        [Bernstein(m), EulerJacobiBeta { r, a, b }] => Some(bej1(fin(*m), inf, r, a, b)),
        [EulerJacobiBeta { r, a, b }, Bernstein(n)] => Some(bej1(inf, fin(*n), r, a, b)),
        [Bernstein(m), EulerJacobiBeta { r, a, b }, Bernstein(n)] => Some(bej1(fin(*m), fin(*n), r, a, b)),
        [EulerJacobiBeta { r: s, a: cc, b: d }, EulerJacobiBeta { r, a, b }] => {
            Some(bej2((s, cc, d), inf, (r, a, b)))
        }
        [EulerJacobiBeta { r: s, a: cc, b: d }, Bernstein(n), EulerJacobiBeta { r, a, b }] => {
            Some(bej2((s, cc, d), fin(*n), (r, a, b)))
        }
        _ => None,
    }
}

/// Where a moment value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    ClosedForm,
    Oracle,
    Numeric,
}

/// Moments of an arbitrary descriptor at `x`: the closed form when the
/// descriptor is in one of the families, the exact oracle when its
/// parameters are rational, numeric integration otherwise.
pub fn operator_moments(
    op: &OperatorDescriptor,
    x: f64,
    q: &QuadratureConfig,
) -> Result<(Moments<f64>, MomentSource)> {
    op.validate()?;
    if let Some(spec) = classify(op) {
        return Ok((moments_in(&spec, &x)?, MomentSource::ClosedForm));
    }
    if op.is_exact() {
        let first = central_moment_exact(op, 1)?.eval_f64(x);
        let t11 = t11_exact(op)?.eval_f64(x);
        let second = central_moment_exact(op, 2)?.eval_f64(x);
        return Ok((Moments { first, second, t11 }, MomentSource::Oracle));
    }
    let h1 = apply(op, &Function::e1(), x, q)?;
    let h2 = apply(op, &Function::e2(), x, q)?;
    let first = h1 - x;
    let second = h2 - 2.0 * x * h1 + x * x;
    Ok((Moments { first, second, t11: h2 - h1 * h1 }, MomentSource::Numeric))
}
