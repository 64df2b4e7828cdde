//! Shared generators for the integration tests.

use morphocell::dsl::{BinaryOp, Expr, Func, NamedConst, Var};
use proptest::prelude::*;

pub const PARAMS: [&str; 5] = ["H", "b", "a", "k", "w"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000).prop_map(|n| Expr::Constant(n as f64)),
        (0.0f64..100.0).prop_map(Expr::Constant),
        prop::sample::select(vec![Var::X, Var::Y, Var::Z, Var::T]).prop_map(Expr::Var),
        prop::sample::select(PARAMS.to_vec()).prop_map(Expr::param),
        prop::sample::select(vec![NamedConst::Phi, NamedConst::Pi, NamedConst::E]).prop_map(Expr::NamedConst),
    ]
}

pub fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 48, 3, |inner| {
        let ops = prop::sample::select(vec![
            BinaryOp::Add,
            BinaryOp::Sub,
            BinaryOp::Mul,
            BinaryOp::Div,
            BinaryOp::Pow,
        ]);
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (ops, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (prop::sample::select(Func::ALL.to_vec()), prop::collection::vec(inner, 2)).prop_map(|(f, mut args)| {
                args.truncate(f.arity());
                Expr::Call(f, args)
            }),
        ]
    })
}
