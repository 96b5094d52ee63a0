//! Small arithmetic expression language.
//!
//! Used for user-supplied test functions (`x^2 - 0.5*abs(x-0.25)`) and for
//! the printed table formulas in the row registry, which additionally refer
//! to operator parameters. Numeric literals are kept exact so formulas can be
//! evaluated in rational arithmetic.
//!
//! Precedence, tightest first: `^` (constant integer exponent 0..=12),
//! unary minus, `* /`, `+ -`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::operator::Function;
use crate::scalar::{parse_rational, rational_to_f64};

pub const MAX_EXPONENT: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sqrt,
    Exp,
    Sin,
    Cos,
}

impl UnaryOp {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => UnaryOp::Abs,
            "sqrt" => UnaryOp::Sqrt,
            "exp" => UnaryOp::Exp,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Exp => "exp",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Literal with its source spelling, exact value and nearest float.
    Number { text: String, value: BigRational, float: f64 },
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn number(text: &str) -> Result<Expr> {
        let value = parse_rational(text)
            .ok_or_else(|| Error::Syntax { pos: 0, msg: format!("bad number `{text}`") })?;
        let float = rational_to_f64(&value);
        Ok(Expr::Number { text: text.to_string(), value, float })
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Pow(..) => 4,
            Expr::Number { .. } | Expr::Var(_) | Expr::Unary(..) => 5,
        }
    }

    /// Names of all variables referenced, sorted and deduplicated.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Number { .. } => {}
                Expr::Var(v) => out.push(v.clone()),
                Expr::Unary(_, a) | Expr::Pow(a, _) => walk(a, out),
                Expr::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    pub fn eval_f64(&self, env: &dyn Fn(&str) -> Option<f64>) -> Result<f64> {
        Ok(match self {
            Expr::Number { float, .. } => *float,
            Expr::Var(v) => env(v).ok_or_else(|| Error::Evaluation(format!("unbound variable `{v}`")))?,
            Expr::Unary(op, a) => {
                let v = a.eval_f64(env)?;
                match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Abs => v.abs(),
                    UnaryOp::Sqrt => v.sqrt(),
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Sin => v.sin(),
                    UnaryOp::Cos => v.cos(),
                }
            }
            Expr::Binary(op, a, b) => {
                let (l, r) = (a.eval_f64(env)?, b.eval_f64(env)?);
                match op {
                    BinaryOp::Add => l + r,
                    BinaryOp::Sub => l - r,
                    BinaryOp::Mul => l * r,
                    BinaryOp::Div => l / r,
                }
            }
            Expr::Pow(a, k) => a.eval_f64(env)?.powi(*k as i32),
        })
    }

    /// Exact evaluation; transcendental functions are rejected.
    pub fn eval_exact(&self, env: &dyn Fn(&str) -> Option<BigRational>) -> Result<BigRational> {
        Ok(match self {
            Expr::Number { value, .. } => value.clone(),
            Expr::Var(v) => env(v).ok_or_else(|| Error::Evaluation(format!("unbound variable `{v}`")))?,
            Expr::Unary(op, a) => {
                let v = a.eval_exact(env)?;
                match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Abs => v.abs(),
                    other => {
                        return Err(Error::Evaluation(format!(
                            "`{}` has no exact rational evaluation",
                            other.name()
                        )))
                    }
                }
            }
            Expr::Binary(op, a, b) => {
                let (l, r) = (a.eval_exact(env)?, b.eval_exact(env)?);
                match op {
                    BinaryOp::Add => l + r,
                    BinaryOp::Sub => l - r,
                    BinaryOp::Mul => l * r,
                    BinaryOp::Div => {
                        if r.is_zero() {
                            return Err(Error::Evaluation("division by zero".into()));
                        }
                        l / r
                    }
                }
            }
            Expr::Pow(a, k) => {
                let base = a.eval_exact(env)?;
                (0..*k).fold(BigRational::one(), |acc, _| acc * &base)
            }
        })
    }

    /// Wraps an expression in `x` as a [`Function`].
    pub fn into_function(self) -> Result<Function> {
        if let Some(v) = self.variables().into_iter().find(|v| v != "x") {
            return Err(Error::UnknownIdentifier { pos: 0, name: v });
        }
        let name = self.to_string();
        Ok(Function::named(name, move |x| {
            self.eval_f64(&|_| Some(x)).unwrap_or(f64::NAN)
        }))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Number { text, .. } => f.write_str(text),
            Expr::Var(v) => f.write_str(v),
            Expr::Unary(UnaryOp::Neg, a) => {
                f.write_str("-")?;
                wrap(f, a, a.precedence() < 3)
            }
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                wrap(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                wrap(f, b, b.precedence() <= p)
            }
            Expr::Pow(a, k) => {
                wrap(f, a, a.precedence() < 4)?;
                write!(f, "^{k}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next()?;
            let end = tok == Tok::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == b'.' {
            let mut end = self.pos;
            while end < self.src.len() && (self.src[end].is_ascii_digit() || self.src[end] == b'.') {
                end += 1;
            }
            if end < self.src.len() && matches!(self.src[end], b'e' | b'E') {
                let mut e = end + 1;
                if e < self.src.len() && matches!(self.src[e], b'+' | b'-') {
                    e += 1;
                }
                if e < self.src.len() && self.src[e].is_ascii_digit() {
                    while e < self.src.len() && self.src[e].is_ascii_digit() {
                        e += 1;
                    }
                    end = e;
                }
            }
            self.pos = end;
            let text = std::str::from_utf8(&self.src[start..end]).expect("ascii");
            if parse_rational(text).is_none() {
                return Err(Error::Syntax { pos: start, msg: format!("malformed number `{text}`") });
            }
            return Ok((Tok::Num(text.to_string()), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = self.pos;
            while end < self.src.len() && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            let text = std::str::from_utf8(&self.src[start..end]).expect("ascii");
            return Ok((Tok::Ident(text.to_string()), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Sym(c as char), start));
        }
        let ch = std::str::from_utf8(&self.src[start..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?');
        Err(Error::Syntax { pos: start, msg: format!("unexpected character `{ch}`") })
    }
}

struct Parser<'v> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    vars: &'v [&'v str],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax { pos: self.pos(), msg: format!("expected `{c}`") })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinaryOp::Add,
                Tok::Sym('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinaryOp::Mul,
                Tok::Sym('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::unary(UnaryOp::Neg, self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Sym('^') {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Num(text) => match text.parse::<u32>() {
                    Ok(k) if k <= MAX_EXPONENT => base = Expr::Pow(Box::new(base), k),
                    _ => return Err(Error::ExponentRange { pos, exp: text }),
                },
                Tok::Sym('-') => {
                    return Err(Error::ExponentRange { pos, exp: "negative".into() })
                }
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "exponent must be an integer literal".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(text) => Expr::number(&text).map_err(|_| Error::Syntax {
                pos,
                msg: format!("malformed number `{text}`"),
            }),
            Tok::Ident(name) => {
                if let Some(op) = UnaryOp::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::unary(op, arg))
                } else if self.vars.contains(&name.as_str()) {
                    Ok(Expr::Var(name))
                } else {
                    Err(Error::UnknownIdentifier { pos, name })
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            Tok::Sym(c) => Err(Error::Syntax { pos, msg: format!("unexpected `{c}`") }),
        }
    }
}

/// Parses an expression over the single variable `x`.
pub fn parse_expression(text: &str) -> Result<Expr> {
    parse_with_vars(text, &["x"])
}

/// Parses an expression whose free identifiers must come from `vars`.
pub fn parse_with_vars(text: &str, vars: &[&str]) -> Result<Expr> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, i: 0, vars };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}
