//! Exact rational polynomial calculus: the ground truth every closed-form
//! moment formula is checked against.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operator::OperatorDescriptor;
use crate::scalar::{rational_to_f64, Param};

/// Dense univariate polynomial with rational coefficients, ascending powers.
///
/// Canonical form: no trailing zero coefficients; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `e_k = x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        RationalPolynomial { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: BigRational, c1: BigRational) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RationalPolynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::from_coeffs((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::from_coeffs((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::from_coeffs(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $m(self, rhs: RationalPolynomial) -> RationalPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Exact image of `p` under the Bernstein operator of degree `n`.
pub fn bernstein_action(n: u32, p: &RationalPolynomial) -> Result<RationalPolynomial> {
    if n == 0 {
        return Err(Error::ParameterDomain("Bernstein degree must be >= 1".into()));
    }
    let n = n as usize;
    let denom = BigInt::from(n);
    let binom_n = binomial_row(n);
    let mut out = vec![BigRational::zero(); n + 1];
    for k in 0..=n {
        let node = BigRational::new(BigInt::from(k), denom.clone());
        let value = p.eval(&node);
        if value.is_zero() {
            continue;
        }
        // C(n,k) x^k (1-x)^(n-k) = C(n,k) sum_j C(n-k,j) (-1)^j x^(k+j)
        let scaled = value * BigRational::from_integer(binom_n[k].clone());
        for (j, c) in binomial_row(n - k).into_iter().enumerate() {
            let term = &scaled * BigRational::from_integer(c);
            if j % 2 == 0 {
                out[k + j] += term;
            } else {
                out[k + j] -= term;
            }
        }
    }
    Ok(RationalPolynomial::from_coeffs(out))
}

/// Exact image of `p` under `Beta_r^{a,b}`: each `e_k` maps to
/// `prod_{i<k} (r x + a + 1 + i) / (r + a + b + 2 + i)`.
pub fn beta_action(
    r: &BigRational,
    a: &BigRational,
    b: &BigRational,
    p: &RationalPolynomial,
) -> Result<RationalPolynomial> {
    let one = BigRational::one();
    let mut image = RationalPolynomial::one();
    let mut out = RationalPolynomial::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if k > 0 {
            let i = BigRational::from_integer(BigInt::from(k - 1));
            let den = r + a + b + BigRational::from_integer(2.into()) + &i;
            if den.is_zero() {
                return Err(Error::ParameterDomain(format!(
                    "Beta moment denominator vanishes for r={r}, a={a}, b={b}"
                )));
            }
            let factor = RationalPolynomial::linear((a + &one + &i) / &den, r / &den);
            image = &image * &factor;
        }
        if !c.is_zero() {
            out = &out + &image.scale(c);
        }
    }
    Ok(out)
}

fn exact(p: &Param) -> Result<&BigRational> {
    p.as_rational()
        .ok_or_else(|| Error::UnsupportedExactParameter(p.to_string()))
}

/// Exact image of `p` under a descriptor, innermost factor first.
pub fn compose_action(op: &OperatorDescriptor, p: &RationalPolynomial) -> Result<RationalPolynomial> {
    op.validate()?;
    let mut acc = p.clone();
    for factor in op.factors().into_iter().rev() {
        acc = match factor {
            OperatorDescriptor::Bernstein(n) => bernstein_action(*n, &acc)?,
            OperatorDescriptor::EulerJacobiBeta { r, a, b } => {
                beta_action(exact(r)?, exact(a)?, exact(b)?, &acc)?
            }
            _ => unreachable!("factors() yields only Bernstein and Beta"),
        };
    }
    Ok(acc)
}

/// Central moment `H((e_1 - x e_0)^order; x)` as a polynomial in `x`.
pub fn central_moment_exact(op: &OperatorDescriptor, order: u32) -> Result<RationalPolynomial> {
    let x = RationalPolynomial::x();
    let h0 = compose_action(op, &RationalPolynomial::one())?;
    let h1 = compose_action(op, &x)?;
    match order {
        1 => Ok(&h1 - &(&x * &h0)),
        2 => {
            let h2 = compose_action(op, &RationalPolynomial::monomial(2))?;
            let two = BigRational::from_integer(2.into());
            Ok(&(&h2 - &(&x * &h1).scale(&two)) + &(&x.pow(2) * &h0))
        }
        _ => Err(Error::Precondition(format!("central moment order {order} not in 1..=2"))),
    }
}

/// `H(e_2; x) - H(e_1; x)^2` as a polynomial in `x`.
pub fn t11_exact(op: &OperatorDescriptor) -> Result<RationalPolynomial> {
    let h1 = compose_action(op, &RationalPolynomial::x())?;
    let h2 = compose_action(op, &RationalPolynomial::monomial(2))?;
    Ok(&h2 - &(&h1 * &h1))
}
