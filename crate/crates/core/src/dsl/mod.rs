//! Expression language in which cells and surfaces are written.
//!
//! Sources such as `abs(x*y)^(1/t)` or `H - b*(x^2 + y^2)` are tokenized, parsed into an
//! [`Expr`] tree and evaluated in IEEE arithmetic at a point `(x, y, z; t)` with bound
//! parameters. The grammar is documented in `docs/dsl.md`.

mod ast;
mod eval;
mod parser;
mod token;

use thiserror::Error;

pub use ast::{BinaryOp, Expr, Func, NamedConst, UnaryOp, Var};
pub use eval::{evaluate, EvalContext};
pub use parser::{parse, MAX_DEPTH};
pub use token::{tokenize, Token, TokenKind};

/// Errors raised while turning source text into an expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("unexpected character {character:?} at offset {position}")]
    Lex { position: usize, character: char },
    #[error("parse error at offset {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("{function} takes {expected} argument(s), got {found} (offset {position})")]
    Arity {
        position: usize,
        function: String,
        expected: usize,
        found: usize,
    },
}

impl DslError {
    pub fn position(&self) -> usize {
        match self {
            DslError::Lex { position, .. }
            | DslError::Parse { position, .. }
            | DslError::Arity { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    LogOfNonPositive,
    SqrtOfNegative,
    DivisionByZero,
    NegativeBaseFractionalExponent,
}

impl DomainKind {
    pub fn describe(self) -> &'static str {
        match self {
            DomainKind::LogOfNonPositive => "logarithm of a non-positive value",
            DomainKind::SqrtOfNegative => "square root of a negative value",
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::NegativeBaseFractionalExponent => {
                "negative base raised to a non-integer exponent"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error: {}", .0.describe())]
    Domain(DomainKind),
    #[error("parameter `{0}` is not bound")]
    UnboundParam(String),
    #[error("time parameter must be positive, got {0}")]
    TimeNotPositive(f64),
}

/// Tokenizes and parses in one step.
pub fn parse_str(source: &str) -> Result<Expr, DslError> {
    parse(&tokenize(source)?)
}
