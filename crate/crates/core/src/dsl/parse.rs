//! Recursive-descent parser for the metric description language.
//!
//! ```text
//! file    := (binding NEWLINE*)+
//! binding := "g" digit digit "=" expr
//!          | "param" ident "=" number
//!          | "domain" coord "=" "(" number "," number ")"
//! expr    := term (("+"|"-") term)*
//! term    := unary (("*"|"/") unary)*
//! unary   := ("-"|"+") unary | factor
//! factor  := atom ("^" uint)?
//! atom    := number | coord | ident | "(" expr ")" | func "(" expr ")"
//! ```
//!
//! Whitespace (including newlines) is insignificant and `#` starts a
//! comment that runs to the end of the line.

use std::collections::BTreeMap;

use super::expr::{BinOp, Expr, Func};
use super::{MetricSpec, Orientation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    Comma,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push(Token { tok, line: tl, column: tc });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v: f64 = s
                .parse()
                .map_err(|_| syntax(tl, tc, format!("malformed number `{s}`")))?;
            col += i - start;
            tokens.push(Token { tok: Tok::Number(v), line: tl, column: tc });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            tokens.push(Token { tok: Tok::Ident(s), line: tl, column: tc });
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character `{c}`")));
    }
    tokens.push(Token { tok: Tok::Eof, line, column: col });
    Ok(tokens)
}

/// Identifier occurrences that must resolve to declared parameters.
struct PendingIdent {
    name: String,
    line: usize,
    column: usize,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    pending: Vec<PendingIdent>,
}

fn coord_index(name: &str) -> Option<usize> {
    match name {
        "x1" => Some(0),
        "x2" => Some(1),
        "x3" => Some(2),
        "x4" => Some(3),
        _ => None,
    }
}

fn component_index(name: &str) -> Option<(usize, usize)> {
    let b = name.as_bytes();
    if b.len() == 3 && b[0] == b'g' && (b'1'..=b'4').contains(&b[1]) && (b'1'..=b'4').contains(&b[2]) {
        Some(((b[1] - b'1') as usize, (b[2] - b'1') as usize))
    } else {
        None
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(syntax(t.line, t.column, format!("expected {what}, found {}", describe(&t.tok))))
        }
    }

    fn number(&mut self) -> Result<f64> {
        let negative = if self.peek().tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        match t.tok {
            Tok::Number(v) => Ok(if negative { -v } else { v }),
            other => Err(syntax(t.line, t.column, format!("expected a number, found {}", describe(&other)))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        match t.tok {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                Ok(Expr::pow(base, v as u32))
            }
            Tok::Minus => Err(syntax(t.line, t.column, "exponents must be nonnegative integers")),
            other => Err(syntax(
                t.line,
                t.column,
                format!("expected a nonnegative integer exponent, found {}", describe(&other)),
            )),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match t.tok {
            Tok::Number(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.close_paren(&t)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(i) = coord_index(&name) {
                    return Ok(Expr::Coord(i));
                }
                if let Some(func) = Func::from_name(&name) {
                    let open = self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                    let arg = self.expr()?;
                    self.close_paren(&open)?;
                    return Ok(Expr::func(func, arg));
                }
                self.pending.push(PendingIdent {
                    name: name.clone(),
                    line: t.line,
                    column: t.column,
                });
                Ok(Expr::Param(name))
            }
            other => Err(syntax(t.line, t.column, format!("expected an operand, found {}", describe(&other)))),
        }
    }

    fn close_paren(&mut self, open: &Token) -> Result<()> {
        let t = self.peek().clone();
        if t.tok == Tok::RParen {
            self.next();
            Ok(())
        } else if t.tok == Tok::Eof {
            Err(syntax(open.line, open.column, "unclosed parenthesis"))
        } else {
            Err(syntax(t.line, t.column, format!("expected `)`, found {}", describe(&t.tok))))
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(v) => format!("number {v}"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parse a metric description into a [`MetricSpec`].
pub fn parse_metric(text: &str) -> Result<MetricSpec> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
        pending: Vec::new(),
    };
    let mut given: BTreeMap<(usize, usize), Expr> = BTreeMap::new();
    let mut params: BTreeMap<String, f64> = BTreeMap::new();
    let mut domain = [MetricSpec::DEFAULT_INTERVAL; 4];
    let mut domain_set = [false; 4];

    if p.peek().tok == Tok::Eof {
        let t = p.peek();
        return Err(syntax(t.line, t.column, "empty metric description"));
    }
    while p.peek().tok != Tok::Eof {
        let head = p.next();
        let name = match &head.tok {
            Tok::Ident(s) => s.clone(),
            other => {
                return Err(syntax(
                    head.line,
                    head.column,
                    format!("expected a binding, found {}", describe(other)),
                ))
            }
        };
        if let Some((i, j)) = component_index(&name) {
            p.expect(Tok::Eq, "`=`")?;
            let e = p.expr()?;
            if given.insert((i, j), e).is_some() {
                return Err(Error::DuplicateBinding(name));
            }
        } else if name == "param" {
            let ident = p.next();
            let pname = match ident.tok {
                Tok::Ident(s) if coord_index(&s).is_none() && Func::from_name(&s).is_none() => s,
                other => {
                    return Err(syntax(
                        ident.line,
                        ident.column,
                        format!("expected a parameter name, found {}", describe(&other)),
                    ))
                }
            };
            p.expect(Tok::Eq, "`=`")?;
            let v = p.number()?;
            if params.insert(pname.clone(), v).is_some() {
                return Err(Error::DuplicateBinding(pname));
            }
        } else if name == "domain" {
            let ct = p.next();
            let idx = match &ct.tok {
                Tok::Ident(s) => coord_index(s),
                _ => None,
            }
            .ok_or_else(|| syntax(ct.line, ct.column, "expected a coordinate x1..x4"))?;
            p.expect(Tok::Eq, "`=`")?;
            p.expect(Tok::LParen, "`(`")?;
            let lo = p.number()?;
            p.expect(Tok::Comma, "`,`")?;
            let hi = p.number()?;
            p.expect(Tok::RParen, "`)`")?;
            if !(lo < hi) {
                return Err(syntax(ct.line, ct.column, "domain interval must satisfy lo < hi"));
            }
            if domain_set[idx] {
                return Err(Error::DuplicateBinding(format!("domain x{}", idx + 1)));
            }
            domain_set[idx] = true;
            domain[idx] = (lo, hi);
        } else {
            return Err(syntax(
                head.line,
                head.column,
                format!("expected `gij`, `param` or `domain`, found `{name}`"),
            ));
        }
    }

    if let Some(unknown) = p.pending.iter().find(|id| !params.contains_key(&id.name)) {
        return Err(Error::UnknownIdentifier {
            name: unknown.name.clone(),
            line: unknown.line,
            column: unknown.column,
        });
    }

    for i in 0..4 {
        if !given.contains_key(&(i, i)) {
            return Err(Error::MissingDiagonal(i + 1));
        }
    }
    let mut entries: Vec<Expr> = Vec::with_capacity(10);
    for i in 0..4 {
        for j in i..4 {
            let e = match (given.get(&(i, j)), given.get(&(j, i))) {
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::AsymmetricEntry { i: i + 1, j: j + 1 })
                }
                (Some(a), _) | (None, Some(a)) => a.clone(),
                (None, None) => Expr::zero(),
            };
            entries.push(e);
        }
    }
    MetricSpec::from_upper(entries, params, domain, Orientation::Standard)
}
