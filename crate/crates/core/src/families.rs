//! Seeded random test functions: the expression families used by the
//! verification suites, and piecewise-linear functions with knots on a
//! fixed grid for the integral inequalities.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::expr::{BinaryOp, Expr, UnaryOp};
use crate::operator::Function;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Polynomial,
    PiecewiseLinear,
    SinLike,
    AbsKink,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] =
        [FamilyKind::Polynomial, FamilyKind::PiecewiseLinear, FamilyKind::SinLike, FamilyKind::AbsKink];
}

fn num(v: f64) -> Expr {
    let lit = Expr::number(&format!("{:.4}", v.abs())).expect("formatted decimal parses");
    if v < 0.0 {
        Expr::unary(UnaryOp::Neg, lit)
    } else {
        lit
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinaryOp::Add, a, b)
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinaryOp::Mul, a, b)
}

fn sub(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinaryOp::Sub, a, b)
}

fn x() -> Expr {
    Expr::var("x")
}

/// Deterministic generator of test functions.
pub struct FunctionSampler {
    rng: ChaCha8Rng,
}

impl FunctionSampler {
    pub fn new(seed: u64) -> Self {
        FunctionSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn coef(&mut self) -> f64 {
        self.rng.gen_range(-1.0..=1.0)
    }

    /// A function from a uniformly chosen family.
    pub fn sample(&mut self) -> Expr {
        let kind = *FamilyKind::ALL.choose(&mut self.rng).expect("non-empty");
        self.sample_kind(kind)
    }

    pub fn sample_kind(&mut self, kind: FamilyKind) -> Expr {
        match kind {
            FamilyKind::Polynomial => self.polynomial(),
            FamilyKind::PiecewiseLinear => self.piecewise_linear(),
            FamilyKind::SinLike => self.sin_like(),
            FamilyKind::AbsKink => self.abs_kink(),
        }
    }

    /// `c0 + c1*x + ... + ck*x^k` with `k` in 1..=5.
    fn polynomial(&mut self) -> Expr {
        let degree = self.rng.gen_range(1..=5u32);
        let mut e = num(self.coef());
        for k in 1..=degree {
            let term = match k {
                1 => x(),
                _ => Expr::Pow(Box::new(x()), k),
            };
            e = add(e, mul(num(2.0 * self.coef()), term));
        }
        e
    }

    /// `y0 + s0*x + sum d_i * (x - t_i + abs(x - t_i)) / 2`.
    fn piecewise_linear(&mut self) -> Expr {
        let mut e = add(num(self.coef()), mul(num(2.0 * self.coef()), x()));
        for _ in 0..self.rng.gen_range(1..=4) {
            let t = num(self.rng.gen_range(0.05..0.95));
            let shifted = sub(x(), t);
            let hinge = Expr::binary(
                BinaryOp::Div,
                add(shifted.clone(), Expr::unary(UnaryOp::Abs, shifted)),
                num(2.0),
            );
            e = add(e, mul(num(4.0 * self.coef()), hinge));
        }
        e
    }

    /// `A*sin(w*x + phi) + B`.
    fn sin_like(&mut self) -> Expr {
        let w = self.rng.gen_range(1.0..8.0);
        let phi = self.rng.gen_range(0.0..std::f64::consts::TAU);
        let arg = add(mul(num(w), x()), num(phi));
        add(mul(num(self.coef()), Expr::unary(UnaryOp::Sin, arg)), num(self.coef()))
    }

    /// `a*abs(x - t) + b*x + c`.
    fn abs_kink(&mut self) -> Expr {
        let t = num(self.rng.gen_range(0.05..0.95));
        let kink = mul(num(2.0 * self.coef()), Expr::unary(UnaryOp::Abs, sub(x(), t)));
        add(add(kink, mul(num(self.coef()), x())), num(self.coef()))
    }

    /// Monotone piecewise-linear function with knots at multiples of
    /// `1/grid`; nondecreasing when `increasing`, else nonincreasing.
    pub fn monotone_piecewise_linear(&mut self, grid: usize, increasing: bool) -> PiecewiseLinear {
        let mut knots = self.knot_positions(grid);
        let mut y = self.coef();
        for k in knots.iter_mut() {
            y += self.rng.gen_range(0.0..1.0) * if increasing { 1.0 } else { -1.0 };
            k.1 = y;
        }
        PiecewiseLinear::new(knots)
    }

    /// Nonnegative piecewise-linear weight with knots on the grid.
    pub fn nonnegative_weight(&mut self, grid: usize) -> PiecewiseLinear {
        let mut knots = self.knot_positions(grid);
        for k in knots.iter_mut() {
            k.1 = self.rng.gen_range(0.0..2.0);
        }
        PiecewiseLinear::new(knots)
    }

    /// Arbitrary piecewise-linear function with knots on the grid.
    pub fn grid_piecewise_linear(&mut self, grid: usize) -> PiecewiseLinear {
        let mut knots = self.knot_positions(grid);
        for k in knots.iter_mut() {
            k.1 = self.coef();
        }
        PiecewiseLinear::new(knots)
    }

    fn knot_positions(&mut self, grid: usize) -> Vec<(f64, f64)> {
        let interior = self.rng.gen_range(1..=5usize).min(grid.saturating_sub(1));
        let mut idx: Vec<usize> = (0..interior).map(|_| self.rng.gen_range(1..grid)).collect();
        idx.push(0);
        idx.push(grid);
        idx.sort_unstable();
        idx.dedup();
        idx.into_iter().map(|i| (i as f64 / grid as f64, 0.0)).collect()
    }
}

/// Continuous piecewise-linear function through `(t, y)` knots spanning [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Self {
        assert!(knots.len() >= 2, "piecewise-linear function needs two knots");
        PiecewiseLinear { knots }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = self.knots.partition_point(|p| p.0 <= t).clamp(1, self.knots.len() - 1);
        let (t0, y0) = self.knots[k - 1];
        let (t1, y1) = self.knots[k];
        y0 + (y1 - y0) * (t - t0) / (t1 - t0)
    }

    pub fn to_function(&self) -> Function {
        let me = self.clone();
        Function::named(format!("{me}"), move |t| me.eval(t))
    }

    pub fn min(&self) -> f64 {
        self.knots.iter().map(|k| k.1).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.knots.iter().map(|k| k.1).fold(f64::NEG_INFINITY, f64::max)
    }
}

impl std::fmt::Display for PiecewiseLinear {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("pl[")?;
        for (i, (t, y)) in self.knots.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({t}, {y:.4})")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    #[test]
    fn same_seed_same_functions() {
        let a: Vec<String> = {
            let mut s = FunctionSampler::new(7);
            (0..20).map(|_| s.sample().to_string()).collect()
        };
        let mut s = FunctionSampler::new(7);
        let b: Vec<String> = (0..20).map(|_| s.sample().to_string()).collect();
        assert_eq!(a, b);
        let mut s = FunctionSampler::new(8);
        assert_ne!(a[0..5], (0..5).map(|_| s.sample().to_string()).collect::<Vec<_>>()[..]);
    }

    #[test]
    fn samples_round_trip_through_the_parser() {
        let mut s = FunctionSampler::new(1);
        for kind in FamilyKind::ALL {
            for _ in 0..10 {
                let e = s.sample_kind(kind);
                assert_eq!(parse_expression(&e.to_string()).unwrap(), e);
                let f = e.into_function().unwrap();
                assert!(f.eval(0.37).is_finite());
            }
        }
    }

    #[test]
    fn piecewise_linear_shapes() {
        let mut s = FunctionSampler::new(3);
        for _ in 0..20 {
            let up = s.monotone_piecewise_linear(256, true);
            let down = s.monotone_piecewise_linear(256, false);
            let w = s.nonnegative_weight(256);
            for i in 0..100 {
                let (a, b) = (i as f64 / 100.0, (i + 1) as f64 / 100.0);
                assert!(up.eval(a) <= up.eval(b));
                assert!(down.eval(a) >= down.eval(b));
                assert!(w.eval(a) >= 0.0);
            }
            for (t, _) in up.knots() {
                assert_eq!((t * 256.0).fract(), 0.0);
            }
        }
        let pl = PiecewiseLinear::new(vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]);
        assert_eq!(pl.eval(0.25), 0.5);
        assert_eq!(pl.eval(1.0), 0.0);
    }
}
