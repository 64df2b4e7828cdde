use std::collections::BTreeMap;

use super::ast::{BinaryOp, Expr, Func, NamedConst, UnaryOp, Var};
use super::{DomainKind, EvalError};
use crate::scalar::Real;

/// Point in space-time plus parameter bindings at which an expression is evaluated.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalContext<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub t: T,
    pub params: BTreeMap<String, T>,
}

impl<T: Real> EvalContext<T> {
    pub fn new(x: T, y: T, z: T, t: T) -> Self {
        EvalContext {
            x,
            y,
            z,
            t,
            params: BTreeMap::new(),
        }
    }

    pub fn with_params(mut self, params: BTreeMap<String, T>) -> Self {
        self.params = params;
        self
    }

    pub fn bind(mut self, name: impl Into<String>, value: T) -> Self {
        self.params.insert(name.into(), value);
        self
    }
}

/// Evaluates `expr` at `ctx`. Pure: identical inputs give bit-identical results.
pub fn evaluate<T: Real>(expr: &Expr, ctx: &EvalContext<T>) -> Result<T, EvalError> {
    Ok(match expr {
        Expr::Constant(v) => T::lit(*v),
        Expr::Var(v) => match v {
            Var::X => ctx.x,
            Var::Y => ctx.y,
            Var::Z => ctx.z,
            Var::T => {
                if !(ctx.t > T::zero()) {
                    return Err(EvalError::TimeNotPositive(ctx.t.to_f64_lossy()));
                }
                ctx.t
            }
        },
        Expr::Param(name) => *ctx
            .params
            .get(name)
            .ok_or_else(|| EvalError::UnboundParam(name.clone()))?,
        Expr::NamedConst(c) => match c {
            NamedConst::Phi => T::golden(),
            NamedConst::Pi => T::PI(),
            NamedConst::E => T::E(),
        },
        Expr::Unary(UnaryOp::Neg, c) => -evaluate(c, ctx)?,
        Expr::Binary(op, l, r) => {
            let a = evaluate(l, ctx)?;
            let b = evaluate(r, ctx)?;
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => {
                    if b == T::zero() {
                        return Err(EvalError::Domain(DomainKind::DivisionByZero));
                    }
                    a / b
                }
                BinaryOp::Pow => power(a, b)?,
            }
        }
        Expr::Call(func, args) => {
            let a = evaluate(&args[0], ctx)?;
            match func {
                Func::Abs => a.abs(),
                Func::Sqrt => {
                    if a < T::zero() {
                        return Err(EvalError::Domain(DomainKind::SqrtOfNegative));
                    }
                    a.sqrt()
                }
                Func::Exp => a.exp(),
                Func::Ln => {
                    if !(a > T::zero()) {
                        return Err(EvalError::Domain(DomainKind::LogOfNonPositive));
                    }
                    a.ln()
                }
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Atan2 => a.atan2(evaluate(&args[1], ctx)?),
                Func::Min => a.min(evaluate(&args[1], ctx)?),
                Func::Max => a.max(evaluate(&args[1], ctx)?),
            }
        }
    })
}

/// `a^b` over the reals. `0^0 = 1`.
fn power<T: Real>(a: T, b: T) -> Result<T, EvalError> {
    if a < T::zero() && b.fract() != T::zero() {
        return Err(EvalError::Domain(DomainKind::NegativeBaseFractionalExponent));
    }
    if a == T::zero() && b < T::zero() {
        return Err(EvalError::Domain(DomainKind::DivisionByZero));
    }
    Ok(a.powf(b))
}
