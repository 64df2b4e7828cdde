//! Recursive-descent parser.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative because its exponent is parsed at the `unary` level.

use super::ast::{BinaryOp, Expr, Func, NamedConst, Var};
use super::token::{Token, TokenKind};
use super::DslError;

/// Nesting bound that keeps hostile input from exhausting the stack.
pub const MAX_DEPTH: usize = 200;

pub fn parse(tokens: &[Token]) -> Result<Expr, DslError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        depth: 0,
    };
    let expr = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(p.error_at(tok.position, "operator or end of input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn end_position(&self) -> usize {
        self.tokens
            .last()
            .map(|t| t.position + t.width())
            .unwrap_or(0)
    }

    fn error_at(&self, position: usize, expected: &str) -> DslError {
        DslError::Parse {
            position,
            expected: expected.to_string(),
        }
    }

    fn error_here(&self, expected: &str) -> DslError {
        let position = self
            .peek()
            .map(|t| t.position)
            .unwrap_or_else(|| self.end_position());
        self.error_at(position, expected)
    }

    fn eat_operator(&mut self, ops: &[&str]) -> Option<&'a str> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Operator && ops.contains(&t.lexeme.as_str()) => {
                self.pos += 1;
                Some(t.lexeme.as_str())
            }
            _ => None,
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<&'a Token, DslError> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn enter(&mut self) -> Result<(), DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_here("shallower nesting"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(op) = self.eat_operator(&["+", "-"]) {
            let rhs = self.term()?;
            let op = if op == "+" { BinaryOp::Add } else { BinaryOp::Sub };
            lhs = Expr::binary(op, lhs, rhs);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.eat_operator(&["*", "/"]) {
            let rhs = self.unary()?;
            let op = if op == "*" { BinaryOp::Mul } else { BinaryOp::Div };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.eat_operator(&["-"]).is_some() {
            self.enter()?;
            let child = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::neg(child));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.primary()?;
        if self.eat_operator(&["^"]).is_some() {
            self.enter()?;
            let exponent = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, DslError> {
        let Some(tok) = self.peek() else {
            return Err(self.error_here("number, identifier or '('"));
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                let value: f64 = tok
                    .lexeme
                    .parse()
                    .map_err(|_| self.error_at(tok.position, "finite number"))?;
                if !value.is_finite() {
                    return Err(self.error_at(tok.position, "finite number"));
                }
                Ok(Expr::Constant(value))
            }
            TokenKind::Identifier => {
                self.pos += 1;
                let name = tok.lexeme.as_str();
                if let Some(func) = Func::from_name(name) {
                    return self.call(func, tok);
                }
                if let Some(v) = Var::from_name(name) {
                    Ok(Expr::Var(v))
                } else if let Some(c) = NamedConst::from_name(name) {
                    Ok(Expr::NamedConst(c))
                } else {
                    Ok(Expr::Param(name.to_string()))
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error_here("number, identifier or '('")),
        }
    }

    fn call(&mut self, func: Func, name_tok: &Token) -> Result<Expr, DslError> {
        self.expect(TokenKind::LParen, "'(' after function name")?;
        let mut args = vec![self.expr()?];
        while self.peek().is_some_and(|t| t.kind == TokenKind::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(TokenKind::RParen, "',' or ')'")?;
        if args.len() != func.arity() {
            return Err(DslError::Arity {
                position: name_tok.position,
                function: func.name().to_string(),
                expected: func.arity(),
                found: args.len(),
            });
        }
        Ok(Expr::Call(func, args))
    }
}
