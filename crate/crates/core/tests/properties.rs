use std::collections::BTreeMap;

use proptest::prelude::*;

use conflab::dsl::{compile, parse_expr, BinOp, Expr, Func};
use conflab::jet::{space, Jet};

const VARS: usize = 2;
const ORDER: usize = 3;

fn jet() -> impl Strategy<Value = Jet> {
    let len = space(VARS, ORDER).len();
    prop::collection::vec(-2.0f64..2.0, len).prop_map(|c| Jet::from_coeffs(VARS, ORDER, c).unwrap())
}

fn assert_close(a: &Jet, b: &Jet) {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        assert!((x - y).abs() <= 1e-11 * (1.0 + x.abs().max(y.abs())), "{a:?} vs {b:?}");
    }
}

proptest! {
    #[test]
    fn ring_axioms(a in jet(), b in jet(), c in jet()) {
        let one = Jet::constant(1.0, VARS, ORDER);
        assert_close(&(&a + &b), &(&b + &a));
        assert_close(&(&a * &b), &(&b * &a));
        assert_close(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
        assert_close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
        assert_close(&(&a * &one), &a);
        assert_close(&(&a - &a), &Jet::zero(VARS, ORDER));
    }

    #[test]
    fn reciprocal_inverts(a in jet()) {
        let a = a.add_scalar(3.0);
        assert_close(&(&a * &a.recip().unwrap()), &Jet::constant(1.0, VARS, ORDER));
    }

    #[test]
    fn truncation_commutes_with_operations(a in jet(), b in jet(), m in 0usize..=ORDER) {
        let t = |j: &Jet| j.truncate(m);
        assert_close(&t(&(&a * &b)), &(&t(&a) * &t(&b)));
        assert_close(&t(&a.exp()), &t(&a).exp());
        assert_close(&t(&a.sin()), &t(&a).sin());
        let pos = a.add_scalar(3.0);
        assert_close(&t(&pos.powf(0.5).unwrap()), &t(&pos).powf(0.5).unwrap());
    }

    #[test]
    fn print_parse_round_trip(e in expr()) {
        let printed = e.to_string();
        let back = parse_expr(&printed).unwrap();
        prop_assert_eq!(&back, &e, "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn printed_form_evaluates_identically(e in expr(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let coords = ["x".to_string(), "y".to_string()];
        let params = BTreeMap::new();
        // constant folding can already fail at compile time
        let eval = |e: &Expr| compile(e, &coords, &params).and_then(|c| c.eval_f64(&[x, y]));
        let a = eval(&e);
        let b = eval(&parse_expr(&e.to_string()).unwrap());
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!(a == b || (a.is_nan() && b.is_nan())),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..50).prop_map(|v| Expr::Num(v as f64 / 4.0)),
        prop_oneof![Just("x"), Just("y")].prop_map(Expr::ident),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (
                prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div), Just(BinOp::Pow)],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expr::bin(op, a, b)),
            (prop_oneof![Just(Func::Sin), Just(Func::Exp), Just(Func::Sqrt)], inner).prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}
