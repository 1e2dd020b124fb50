//! Closed-form expressions over coordinates and parameters.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?          // right-associative
//! atom  := number | ident | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! So `-a^b` is `-(a^b)` and `a^b^c` is `a^(b^c)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn apply_f64(self, x: f64) -> Result<f64> {
        let bad = |what: &str| Err(Error::SingularPoint(format!("{what}({x})")));
        match self {
            Func::Exp => Ok(x.exp()),
            Func::Log if x <= 0.0 => bad("log"),
            Func::Log => Ok(x.ln()),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => Ok(x.tan()),
            Func::Sqrt if x <= 0.0 => bad("sqrt"),
            Func::Sqrt => Ok(x.sqrt()),
            Func::Abs if x == 0.0 => bad("abs"),
            Func::Abs => Ok(x.abs()),
        }
    }

    fn apply_jet(self, x: &Jet) -> Result<Jet> {
        match self {
            Func::Exp => Ok(x.exp()),
            Func::Log => x.ln(),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => x.tan(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

/// Expression tree as parsed from text.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        if v < 0.0 {
            Expr::Neg(Box::new(Expr::Num(-v)))
        } else {
            Expr::Num(v)
        }
    }

    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.to_string())
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 0.0)
    }

    /// Identifiers appearing anywhere in the tree.
    pub fn identifiers(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_identifiers(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_identifiers(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Ident(s) => out.push(s.clone()),
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_identifiers(out),
            Expr::Bin(_, a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
        }
    }

    /// Replaces every occurrence of identifier `name` by `with`.
    pub fn substitute(&self, name: &str, with: &Expr) -> Expr {
        match self {
            Expr::Ident(s) if s == name => with.clone(),
            Expr::Num(_) | Expr::Ident(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(name, with))),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.substitute(name, with))),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.substitute(name, with), b.substitute(name, with)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 5,
        }
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
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, a.precedence() < 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(BinOp::Pow, a, b) => {
                wrap(f, a, a.precedence() <= 4)?;
                write!(f, "^")?;
                wrap(f, b, b.precedence() < 3)
            }
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                wrap(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                wrap(f, b, b.precedence() <= p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("malformed number `{text}`"),
            })?;
            out.push((Token::Num(v), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Token::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Token::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{}`", src[i..].chars().next().unwrap()),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::bin(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::bin(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            Ok(Expr::bin(BinOp::Pow, base, self.unary()?))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Token::Sym('(')) {
                    let func = Func::from_name(&name)
                        .ok_or(Error::UnknownFunction { name, pos: at })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return self.error("expected `)`");
                    }
                    Ok(Expr::call(func, arg))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            Some(_) => self.error("expected a number, identifier or `(`"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses an expression; errors carry the byte offset of the offending token.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Expression with parameters folded to literals and coordinates resolved to slots.
#[derive(Debug, Clone, PartialEq)]
pub enum Compiled {
    Const(f64),
    Coord(usize),
    Neg(Box<Compiled>),
    Bin(BinOp, Box<Compiled>, Box<Compiled>),
    /// Power with a constant integer exponent.
    PowInt(Box<Compiled>, i32),
    Call(Func, Box<Compiled>),
}

/// Resolves identifiers against coordinate names and parameter values.
///
/// Parameters shadow nothing: a name declared both as coordinate and
/// parameter resolves to the coordinate. `pi` is built in.
pub fn compile(e: &Expr, coords: &[String], params: &BTreeMap<String, f64>) -> Result<Compiled> {
    let c = match e {
        Expr::Num(v) => Compiled::Const(*v),
        Expr::Ident(name) => {
            if let Some(i) = coords.iter().position(|c| c == name) {
                Compiled::Coord(i)
            } else if let Some(v) = params.get(name) {
                Compiled::Const(*v)
            } else if name == "pi" {
                Compiled::Const(std::f64::consts::PI)
            } else {
                return Err(Error::UnknownIdentifier(name.clone()));
            }
        }
        Expr::Neg(a) => match compile(a, coords, params)? {
            Compiled::Const(v) => Compiled::Const(-v),
            other => Compiled::Neg(Box::new(other)),
        },
        Expr::Call(f, a) => match compile(a, coords, params)? {
            Compiled::Const(v) => Compiled::Const(f.apply_f64(v)?),
            other => Compiled::Call(*f, Box::new(other)),
        },
        Expr::Bin(op, a, b) => {
            let a = compile(a, coords, params)?;
            let b = compile(b, coords, params)?;
            match (op, a, b) {
                (_, Compiled::Const(x), Compiled::Const(y)) => {
                    Compiled::Const(apply_bin_f64(*op, x, y)?)
                }
                (BinOp::Pow, base, Compiled::Const(y))
                    if y.fract() == 0.0 && y.abs() <= 64.0 =>
                {
                    Compiled::PowInt(Box::new(base), y as i32)
                }
                (op, a, b) => Compiled::Bin(*op, Box::new(a), Box::new(b)),
            }
        }
    };
    Ok(c)
}

fn apply_bin_f64(op: BinOp, x: f64, y: f64) -> Result<f64> {
    Ok(match op {
        BinOp::Add => x + y,
        BinOp::Sub => x - y,
        BinOp::Mul => x * y,
        BinOp::Div => {
            if y == 0.0 {
                return Err(Error::SingularPoint(format!("division {x}/0")));
            }
            x / y
        }
        BinOp::Pow => {
            if y.fract() == 0.0 && y.abs() <= 64.0 {
                if x == 0.0 && y < 0.0 {
                    return Err(Error::SingularPoint(format!("0^{y}")));
                }
                x.powi(y as i32)
            } else if x > 0.0 {
                x.powf(y)
            } else {
                return Err(Error::SingularPoint(format!("{x}^{y} with non-positive base")));
            }
        }
    })
}

impl Compiled {
    /// Converts back to a printable tree, naming coordinates.
    pub fn to_expr(&self, coords: &[String]) -> Expr {
        match self {
            Compiled::Const(v) => Expr::num(*v),
            Compiled::Coord(i) => Expr::Ident(coords[*i].clone()),
            Compiled::Neg(a) => Expr::Neg(Box::new(a.to_expr(coords))),
            Compiled::Bin(op, a, b) => Expr::bin(*op, a.to_expr(coords), b.to_expr(coords)),
            Compiled::PowInt(a, k) => {
                Expr::bin(BinOp::Pow, a.to_expr(coords), Expr::num(*k as f64))
            }
            Compiled::Call(f, a) => Expr::call(*f, a.to_expr(coords)),
        }
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        match self {
            Compiled::Const(v) => Ok(*v),
            Compiled::Coord(i) => Ok(point[*i]),
            Compiled::Neg(a) => Ok(-a.eval_f64(point)?),
            Compiled::Bin(op, a, b) => apply_bin_f64(*op, a.eval_f64(point)?, b.eval_f64(point)?),
            Compiled::PowInt(a, k) => {
                let x = a.eval_f64(point)?;
                if x == 0.0 && *k < 0 {
                    return Err(Error::SingularPoint(format!("0^{k}")));
                }
                Ok(x.powi(*k))
            }
            Compiled::Call(f, a) => f.apply_f64(a.eval_f64(point)?),
        }
    }

    /// Jet of the expression at `point`, exact through `order`.
    ///
    /// Domain violations name the offending subexpression.
    pub fn eval_jet(&self, coords: &[String], point: &[f64], order: usize) -> Result<Jet> {
        self.jet_inner(point, order).map_err(|(e, node)| match e {
            Error::SingularPoint(msg) => {
                Error::SingularPoint(format!("{msg} in `{}`", node.to_expr(coords)))
            }
            other => other,
        })
    }

    fn jet_inner(&self, point: &[f64], order: usize) -> std::result::Result<Jet, (Error, Compiled)> {
        let n = point.len();
        let fail = |e: Error| (e, self.clone());
        match self {
            Compiled::Const(v) => Ok(Jet::constant(*v, n, order)),
            Compiled::Coord(i) => Jet::variable(*i, point[*i], n, order).map_err(fail),
            Compiled::Neg(a) => Ok(-a.jet_inner(point, order)?),
            Compiled::Call(f, a) => f.apply_jet(&a.jet_inner(point, order)?).map_err(fail),
            Compiled::PowInt(a, k) => a.jet_inner(point, order)?.powi(*k).map_err(fail),
            Compiled::Bin(op, a, b) => {
                let x = a.jet_inner(point, order)?;
                let y = b.jet_inner(point, order)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => x.try_div(&y).map_err(fail),
                    BinOp::Pow => {
                        if x.value() <= 0.0 {
                            return Err(fail(Error::SingularPoint(format!(
                                "variable exponent on non-positive base {}",
                                x.value()
                            ))));
                        }
                        // a^b = exp(b log a)
                        Ok((y * x.ln().map_err(fail)?).exp())
                    }
                }
            }
        }
    }
}
