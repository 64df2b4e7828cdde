use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    T,
}

impl Var {
    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            "t" => Some(Var::T),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::T => "t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConst {
    Phi,
    Pi,
    E,
}

impl NamedConst {
    pub fn from_name(name: &str) -> Option<NamedConst> {
        match name {
            "phi" => Some(NamedConst::Phi),
            "pi" => Some(NamedConst::Pi),
            "e" => Some(NamedConst::E),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedConst::Phi => "phi",
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Abs,
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Atan2,
    Min,
    Max,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Abs,
        Func::Sqrt,
        Func::Exp,
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Atan2,
        Func::Min,
        Func::Max,
    ];

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Atan2 => "atan2",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Atan2 | Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

/// Expression tree over `x, y, z, t`, named parameters and the constants `phi`, `pi`, `e`.
///
/// Constants produced by the parser are finite and non-negative; negation is always an
/// explicit [`Expr::Unary`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Var(Var),
    Param(String),
    NamedConst(NamedConst),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn neg(child: Expr) -> Expr {
        Expr::Unary(UnaryOp::Neg, Box::new(child))
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    /// Names of all parameters reachable in the tree.
    pub fn free_params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Param(name) = e {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn uses_var(&self, var: Var) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Expr::Var(v) if *v == var));
        found
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Unary(_, c) => 1 + c.depth(),
            Expr::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
            Expr::Call(_, args) => 1 + args.iter().map(Expr::depth).max().unwrap_or(0),
            _ => 1,
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Unary(_, c) => c.visit(f),
            Expr::Binary(_, l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.visit(f)),
            _ => {}
        }
    }
}

/// Binding strength used by the printer; mirrors the parser's grammar levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Additive,
    Multiplicative,
    Unary,
    Power,
    Atom,
}

fn level(e: &Expr) -> Level {
    match e {
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => Level::Additive,
        Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => Level::Multiplicative,
        Expr::Unary(..) => Level::Unary,
        Expr::Binary(BinaryOp::Pow, ..) => Level::Power,
        _ => Level::Atom,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: Level) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimum parentheses needed to re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(v) => write!(f, "{v}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Param(p) => f.write_str(p),
            Expr::NamedConst(c) => f.write_str(c.name()),
            Expr::Unary(UnaryOp::Neg, c) => {
                f.write_str("-")?;
                write_at(f, c, Level::Unary)
            }
            Expr::Binary(op, l, r) => match op {
                BinaryOp::Add | BinaryOp::Sub => {
                    write_at(f, l, Level::Additive)?;
                    write!(f, " {} ", op.symbol())?;
                    write_at(f, r, Level::Multiplicative)
                }
                BinaryOp::Mul | BinaryOp::Div => {
                    write_at(f, l, Level::Multiplicative)?;
                    f.write_str(op.symbol())?;
                    write_at(f, r, Level::Unary)
                }
                BinaryOp::Pow => {
                    write_at(f, l, Level::Atom)?;
                    f.write_str("^")?;
                    write_at(f, r, Level::Unary)
                }
            },
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
