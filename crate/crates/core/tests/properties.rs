use bej_core::expr::{parse_expression, BinaryOp, Expr, UnaryOp};
use bej_core::gruss::{chebyshev_functional, BoundKind, GrussConfig, PreparedFunction, bound_prepared};
use bej_core::modulus::{least_concave_majorant, modulus_curve, GridFunction};
use bej_core::moments::{bej1_second_moment, moments_exact, moments_in};
use bej_core::oracle::{central_moment_exact, compose_action, t11_exact, RationalPolynomial};
use bej_core::scalar::rational;
use bej_core::*;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn index() -> impl Strategy<Value = ExtendedIndex> {
    prop_oneof![3 => (1u32..=8).prop_map(ExtendedIndex::Finite), 1 => Just(ExtendedIndex::Infinity)]
}

fn rate() -> impl Strategy<Value = ExtendedRate> {
    prop_oneof![
        4 => (1i64..=20, 1i64..=4).prop_map(|(p, q)| ExtendedRate::Finite(Param::ratio(p, q))),
        1 => Just(ExtendedRate::Infinity),
    ]
}

fn jacobi() -> impl Strategy<Value = Param> {
    prop::sample::select(vec![(-1, 1), (-1, 2), (0, 1), (1, 1), (3, 2), (2, 1)])
        .prop_map(|(p, q)| Param::ratio(p, q))
}

fn bej_spec() -> impl Strategy<Value = BejSpec> {
    let one = (index(), index(), rate(), jacobi(), jacobi())
        .prop_map(|(m, n, r, a, b)| BejSpec::TypeI(Bej1Spec::new(m, n, r, a, b).unwrap()));
    let two = (index(), rate(), jacobi(), jacobi(), rate(), jacobi(), jacobi())
        .prop_map(|(n, s, c, d, r, a, b)| BejSpec::TypeII(Bej2Spec::new(n, s, c, d, r, a, b).unwrap()));
    prop_oneof![one, two]
}

fn unit_rational() -> impl Strategy<Value = BigRational> {
    (0i64..=12).prop_map(|k| rational(k, 12))
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::var("x")),
        prop::sample::select(vec!["0", "1", "2.5", "0.125", "3", "1e-2"]).prop_map(|t| Expr::number(t).unwrap()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop::sample::select(vec![BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div]))
                .prop_map(|(a, b, op)| Expr::binary(op, a, b)),
            (inner.clone(), prop::sample::select(vec![UnaryOp::Neg, UnaryOp::Abs, UnaryOp::Sin, UnaryOp::Exp]))
                .prop_map(|(a, op)| Expr::unary(op, a)),
            (inner, 0u32..=12).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn numeric_apply_agrees_with_oracle(spec in bej_spec(), k in 0usize..=4, x in 0.0f64..=1.0) {
        let op = spec.descriptor().unwrap();
        let exact = compose_action(&op, &RationalPolynomial::monomial(k)).unwrap().eval_f64(x);
        let numeric = apply(&op, &Function::monomial(k as i32), x, &QuadratureConfig::default()).unwrap();
        prop_assert!((exact - numeric).abs() <= 1e-10, "{op}: {exact} vs {numeric}");
    }

    #[test]
    fn operators_are_positive_and_reproduce_constants(spec in bej_spec(), x in 0.0f64..=1.0, c in -5.0f64..5.0) {
        let op = spec.descriptor().unwrap();
        let q = QuadratureConfig::default();
        let h = apply(&op, &Function::constant(c), x, &q).unwrap();
        prop_assert!((h - c).abs() <= 1e-12 * c.abs().max(1.0));
        let pos = Function::new(|t| (t - 0.4).abs() + (9.0 * t).sin().powi(2));
        prop_assert!(apply(&op, &pos, x, &q).unwrap() >= 0.0);
    }

    #[test]
    fn linear_reproduction_matches_parameters(spec in bej_spec(), x in unit_rational()) {
        let op = spec.descriptor().unwrap();
        let m1 = central_moment_exact(&op, 1).unwrap();
        let reproduces = |r: &ExtendedRate, a: &Param, b: &Param| {
            matches!(r, ExtendedRate::Infinity) || (*a == Param::int(-1) && *b == Param::int(-1))
        };
        let expect_zero = match &spec {
            BejSpec::TypeI(s) => reproduces(&s.r, &s.a, &s.b),
            BejSpec::TypeII(s) => reproduces(&s.s, &s.c, &s.d) && reproduces(&s.r, &s.a, &s.b),
        };
        if expect_zero {
            prop_assert!(m1.is_zero());
        }
        let closed = moments_exact(&spec, &x).unwrap();
        prop_assert_eq!(closed.first, m1.eval(&x));
    }

    #[test]
    fn oracle_preserves_degree(spec in bej_spec(), k in 0usize..=6) {
        let op = spec.descriptor().unwrap();
        let image = compose_action(&op, &RationalPolynomial::monomial(k)).unwrap();
        prop_assert!(image.degree().unwrap_or(0) <= k);
    }

    #[test]
    fn moments_are_consistent_and_nonnegative(spec in bej_spec(), x in unit_rational()) {
        let op = spec.descriptor().unwrap();
        let m = moments_exact(&spec, &x).unwrap();
        prop_assert_eq!(&m.second, &central_moment_exact(&op, 2).unwrap().eval(&x));
        prop_assert_eq!(&m.t11, &t11_exact(&op).unwrap().eval(&x));
        prop_assert_eq!(&m.t11, &(&m.second - &m.first * &m.first));
        prop_assert!(!m.second.is_negative());
        prop_assert!(!m.t11.is_negative());
        prop_assert!(m.t11 <= m.second);
    }

    #[test]
    fn symmetric_weights_give_symmetric_moments(
        m in index(), n in index(), r in rate(), a in jacobi(), x in unit_rational()
    ) {
        let spec = BejSpec::TypeI(Bej1Spec::new(m, n, r, a.clone(), a).unwrap());
        let one = BigRational::from_integer(1.into());
        let left = moments_in(&spec, &x).unwrap();
        let right = moments_in(&spec, &(&one - &x)).unwrap();
        prop_assert_eq!(left.second, right.second);
        prop_assert_eq!(left.first, -right.first);
    }

    #[test]
    fn modulus_is_monotone_subadditive_and_majorised(values in prop::collection::vec(-3.0f64..3.0, 3..80)) {
        let g = GridFunction::from_values(values).unwrap();
        let c = modulus_curve(&g);
        let w = c.values();
        prop_assert_eq!(w[0], 0.0);
        for j in 1..w.len() {
            prop_assert!(w[j] >= w[j - 1]);
            for k in 0..w.len() - j {
                prop_assert!(w[j + k] <= w[j] + w[k] + 1e-12);
            }
        }
        let m = least_concave_majorant(&c);
        let vals: Vec<f64> = (0..w.len()).map(|j| m.eval(c.t(j)).unwrap()).collect();
        for j in 0..w.len() {
            prop_assert!(vals[j] >= w[j]);
            if j > 0 {
                prop_assert!(vals[j] <= 2.0 * w[j] + 1e-12);
                prop_assert!(vals[j] >= vals[j - 1]);
            }
            if j > 0 && j + 1 < w.len() {
                prop_assert!(vals[j] + 1e-12 >= 0.5 * (vals[j - 1] + vals[j + 1]));
            }
        }
        for j in m.vertex_indices() {
            prop_assert_eq!(vals[j], w[j]);
        }
    }

    #[test]
    fn modulus_refines_under_grid_doubling(freq in 1.0f64..12.0, shift in 0.0f64..1.0, n in 16usize..200) {
        // Lipschitz constant of sin(freq*t + shift) is freq
        let f = Function::new(move |t| (freq * t + shift).sin());
        let coarse = modulus_curve(&GridFunction::from_function(&f, n).unwrap());
        let fine = modulus_curve(&GridFunction::from_function(&f, 2 * n).unwrap());
        for j in 0..=n {
            let gap = (coarse.values()[j] - fine.values()[2 * j]).abs();
            prop_assert!(gap <= 2.0 * freq / n as f64 + 1e-12);
        }
    }

    #[test]
    fn chebyshev_functional_symmetry_and_affine_covariance(
        spec in bej_spec(), x in 0.0f64..=1.0, alpha in -3.0f64..3.0, beta in -3.0f64..3.0, w in 1.0f64..9.0
    ) {
        let op = spec.descriptor().unwrap();
        let q = QuadratureConfig::default();
        let f = Function::new(move |t| (w * t).sin() + t * t);
        let g = Function::new(|t| (t - 0.3).abs() - t * t * t);
        let fg = chebyshev_functional(&op, &f, &g, x, &q).unwrap();
        let gf = chebyshev_functional(&op, &g, &f, x, &q).unwrap();
        prop_assert_eq!(fg, gf);
        let shifted = chebyshev_functional(&op, &f.affine(alpha, beta), &g, x, &q).unwrap();
        prop_assert!((shifted - alpha * fg).abs() <= 1e-10, "{shifted} vs {}", alpha * fg);
    }

    #[test]
    fn cg2_never_exceeds_cg1(spec in bej_spec(), x in 0.0f64..=1.0) {
        let op = spec.descriptor().unwrap();
        let cfg = GrussConfig { modulus_grid: 128, ..GrussConfig::default() };
        let f = PreparedFunction::new(&Function::new(|t| (5.0 * t).cos()), cfg.modulus_grid).unwrap();
        let g = PreparedFunction::new(&Function::e2(), cfg.modulus_grid).unwrap();
        let c1 = bound_prepared(&op, &f, &g, x, BoundKind::Cg1, &cfg).unwrap();
        let c2 = bound_prepared(&op, &f, &g, x, BoundKind::Cg2, &cfg).unwrap();
        prop_assert!(c2.radicand.unwrap() <= c1.radicand.unwrap() + 1e-12);
        prop_assert!(c2.rhs <= c1.rhs + 1e-12);
        prop_assert!(c1.slack >= -1e-9);
    }

    #[test]
    fn expressions_round_trip(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_expression(&text).unwrap(), e, "{}", text);
    }
}

#[test]
fn second_moment_converges_as_m_grows() {
    let spec = |m| {
        Bej1Spec::new(m, ExtendedIndex::Finite(3), ExtendedRate::Finite(Param::int(4)), Param::int(0), Param::int(1)).unwrap()
    };
    let x = 0.3;
    let limit = bej1_second_moment(&spec(ExtendedIndex::Infinity), x);
    let mut last = f64::INFINITY;
    for k in 3..=6 {
        let gap = (bej1_second_moment(&spec(ExtendedIndex::Finite(10u32.pow(k))), x) - limit).abs();
        assert!(gap < last, "gap {gap} at 10^{k} did not shrink");
        last = gap;
    }
    assert!(last <= 1e-5);
}
