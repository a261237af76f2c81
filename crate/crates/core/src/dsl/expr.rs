use std::collections::BTreeMap;
use std::fmt;

use super::jet::Real;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Expression tree for one metric component.
///
/// Coordinates are stored zero-based (`Coord(0)` is `x1`).
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Coord(usize),
    Param(String),
    Neg(Box<Expr>),
    Func(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn pow(base: Expr, n: u32) -> Expr {
        Expr::Pow(Box::new(base), n)
    }

    /// Evaluate over any scalar type. Coordinates become `T::variable`, so
    /// evaluating over [`Jet2`](super::Jet2) propagates exact first and second
    /// derivatives.
    pub fn eval<T: Real>(&self, point: &[f64; 4], params: &BTreeMap<String, f64>) -> Result<T> {
        Ok(match self {
            Expr::Const(c) => T::from_f64(*c),
            Expr::Coord(i) => T::variable(*i, point[*i]),
            Expr::Param(name) => match params.get(name) {
                Some(v) => T::from_f64(*v),
                None => {
                    return Err(Error::Domain {
                        node: self.to_string(),
                        reason: "unbound parameter".into(),
                    })
                }
            },
            Expr::Neg(a) => -a.eval::<T>(point, params)?,
            Expr::Pow(a, n) => a.eval::<T>(point, params)?.powi(*n),
            Expr::Binary(op, a, b) => {
                let a = a.eval::<T>(point, params)?;
                let b = b.eval::<T>(point, params)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.value() == 0.0 {
                            return Err(self.domain_error("division by zero"));
                        }
                        a / b
                    }
                }
            }
            Expr::Func(f, a) => {
                let a = a.eval::<T>(point, params)?;
                let v = a.value();
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => {
                        if v.cos() == 0.0 {
                            return Err(self.domain_error("tan at a pole"));
                        }
                        a.tan()
                    }
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if v <= 0.0 {
                            return Err(self.domain_error("log of a nonpositive value"));
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if v <= 0.0 {
                            return Err(self.domain_error("sqrt of a nonpositive value"));
                        }
                        a.sqrt()
                    }
                    Func::Sinh => a.sinh(),
                    Func::Cosh => a.cosh(),
                }
            }
        })
    }

    fn domain_error(&self, reason: &str) -> Error {
        Error::Domain {
            node: self.to_string(),
            reason: reason.to_string(),
        }
    }

    /// Names of all parameters referenced by the tree.
    pub fn parameters(&self, out: &mut Vec<String>) {
        match self {
            Expr::Param(name) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::Neg(a) | Expr::Func(_, a) | Expr::Pow(a, _) => a.parameters(out),
            Expr::Binary(_, a, b) => {
                a.parameters(out);
                b.parameters(out);
            }
            Expr::Const(_) | Expr::Coord(_) => {}
        }
    }
}

/// Fully parenthesized rendering; parsing the output reproduces the tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{})", -c)
            }
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Coord(i) => write!(f, "x{}", i + 1),
            Expr::Param(name) => write!(f, "{name}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Func(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
        }
    }
}
