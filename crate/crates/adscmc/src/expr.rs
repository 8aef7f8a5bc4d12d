//! Expression language for scalar data.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | name | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-u^2`
//! is `-(u^2)`. The only named constant is `pi`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with the names of its variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprAst {
    pub root: Node,
    pub vars: Vec<String>,
}

pub fn parse_expression(src: &str, vars: &[&str]) -> Result<ExprAst> {
    if src.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { src, pos: 0, vars };
    let root = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.err(format!("unexpected `{}`", p.rest_char())));
    }
    Ok(ExprAst { root, vars: vars.iter().map(|s| s.to_string()).collect() })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn err(&self, message: String) -> Error {
        Error::Syntax { offset: self.pos, message }
    }

    fn rest_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or(' ')
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some('+') => BinOp::Add,
                Some('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some('*') => BinOp::Mul,
                Some('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        let c = match self.peek() {
            None => return Err(self.err("unexpected end of input".into())),
            Some(c) => c,
        };
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("expected `)`".into()));
            }
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = self.pos;
            let bytes = self.src.as_bytes();
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            let name = &self.src[start..self.pos];
            if let Some(i) = self.vars.iter().position(|v| *v == name) {
                return Ok(Node::Var(i));
            }
            if name == "pi" {
                return Ok(Node::Const(std::f64::consts::PI));
            }
            if let Some(f) = Func::lookup(name) {
                if !self.eat('(') {
                    return Err(self.err(format!("expected `(` after `{name}`")));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`".into()));
                }
                return Ok(Node::Call(f, Box::new(arg)));
            }
            return Err(Error::UnknownIdentifier { token: name.to_string(), offset: start });
        }
        Err(self.err(format!("unexpected `{c}`")))
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let b = self.src.as_bytes();
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < b.len() && b[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - s
        };
        let mut p = self.pos;
        let mut n = digits(&mut p);
        if p < b.len() && b[p] == b'.' {
            p += 1;
            n += digits(&mut p);
        }
        if n == 0 {
            return Err(self.err("malformed number".into()));
        }
        if p < b.len() && (b[p] == b'e' || b[p] == b'E') {
            let mut q = p + 1;
            if q < b.len() && (b[q] == b'+' || b[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) > 0 {
                p = q;
            }
        }
        self.pos = p;
        self.src[start..p]
            .parse::<f64>()
            .map(Node::Const)
            .map_err(|_| Error::Syntax { offset: start, message: "malformed number".into() })
    }
}

fn prec(n: &Node) -> u8 {
    match n {
        Node::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Node::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Node::Neg(_) => 3,
        Node::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

impl ExprAst {
    fn write(&self, n: &Node, out: &mut String) {
        let wrap = |this: &Self, child: &Node, paren: bool, out: &mut String| {
            if paren {
                out.push('(');
                this.write(child, out);
                out.push(')');
            } else {
                this.write(child, out);
            }
        };
        match n {
            Node::Const(c) => out.push_str(&format!("{c}")),
            Node::Var(i) => out.push_str(&self.vars[*i]),
            Node::Neg(c) => {
                out.push('-');
                wrap(self, c, prec(c) < 3, out);
            }
            Node::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                self.write(a, out);
                out.push(')');
            }
            Node::Bin(op, l, r) => {
                let (sym, p) = match op {
                    BinOp::Add => ('+', 1),
                    BinOp::Sub => ('-', 1),
                    BinOp::Mul => ('*', 2),
                    BinOp::Div => ('/', 2),
                    BinOp::Pow => ('^', 4),
                };
                let (lp, rp) = if *op == BinOp::Pow {
                    (prec(l) <= 4, prec(r) < 3)
                } else {
                    (prec(l) < p, prec(r) <= p)
                };
                wrap(self, l, lp, out);
                out.push(sym);
                wrap(self, r, rp, out);
            }
        }
    }

    /// Evaluates with `values[i]` bound to `vars[i]`.
    pub fn eval<T: Scalar>(&self, values: &[T]) -> Result<T> {
        let v = eval_node(&self.root, values);
        if v.value().is_finite() {
            Ok(v)
        } else {
            Err(Error::Eval(format!("`{self}` at {:?}", values.iter().map(|x| x.value()).collect::<Vec<_>>())))
        }
    }

    pub fn eval_f64(&self, values: &[f64]) -> Result<f64> {
        self.eval(values)
    }

    /// True when the expression does not reference variable `i`.
    pub fn is_free_of(&self, i: usize) -> bool {
        fn walk(n: &Node, i: usize) -> bool {
            match n {
                Node::Const(_) => true,
                Node::Var(j) => *j != i,
                Node::Neg(c) | Node::Call(_, c) => walk(c, i),
                Node::Bin(_, l, r) => walk(l, i) && walk(r, i),
            }
        }
        walk(&self.root, i)
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&self.root, &mut s);
        f.write_str(&s)
    }
}

/// Numbers the evaluator can run on: plain floats and first-order duals.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(self) -> f64;
    fn apply(self, f: Func) -> Self;
    fn pow(self, e: Self) -> Self;
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(self) -> f64 {
        self
    }
    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
            Func::Exp => self.exp(),
            Func::Ln => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Abs => self.abs(),
        }
    }
    fn pow(self, e: Self) -> Self {
        self.powf(e)
    }
}

/// Value with its gradient in two variables, for exact first derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    pub d: [f64; 2],
}

impl Dual2 {
    pub fn var(v: f64, i: usize) -> Self {
        let mut d = [0.0; 2];
        d[i] = 1.0;
        Dual2 { v, d }
    }

    fn chain(self, v: f64, dv: f64) -> Self {
        Dual2 { v, d: [dv * self.d[0], dv * self.d[1]] }
    }
}

impl Add for Dual2 {
    type Output = Dual2;
    fn add(self, o: Dual2) -> Dual2 {
        Dual2 { v: self.v + o.v, d: [self.d[0] + o.d[0], self.d[1] + o.d[1]] }
    }
}

impl Sub for Dual2 {
    type Output = Dual2;
    fn sub(self, o: Dual2) -> Dual2 {
        Dual2 { v: self.v - o.v, d: [self.d[0] - o.d[0], self.d[1] - o.d[1]] }
    }
}

impl Mul for Dual2 {
    type Output = Dual2;
    fn mul(self, o: Dual2) -> Dual2 {
        Dual2 {
            v: self.v * o.v,
            d: [self.d[0] * o.v + self.v * o.d[0], self.d[1] * o.v + self.v * o.d[1]],
        }
    }
}

impl Div for Dual2 {
    type Output = Dual2;
    fn div(self, o: Dual2) -> Dual2 {
        let w = self.v / o.v;
        Dual2 { v: w, d: [(self.d[0] - w * o.d[0]) / o.v, (self.d[1] - w * o.d[1]) / o.v] }
    }
}

impl Neg for Dual2 {
    type Output = Dual2;
    fn neg(self) -> Dual2 {
        Dual2 { v: -self.v, d: [-self.d[0], -self.d[1]] }
    }
}

impl Scalar for Dual2 {
    fn constant(c: f64) -> Self {
        Dual2 { v: c, d: [0.0; 2] }
    }
    fn value(self) -> f64 {
        self.v
    }
    fn apply(self, f: Func) -> Self {
        let x = self.v;
        match f {
            Func::Sin => self.chain(x.sin(), x.cos()),
            Func::Cos => self.chain(x.cos(), -x.sin()),
            Func::Sinh => self.chain(x.sinh(), x.cosh()),
            Func::Cosh => self.chain(x.cosh(), x.sinh()),
            Func::Tanh => {
                let t = x.tanh();
                self.chain(t, 1.0 - t * t)
            }
            Func::Exp => self.chain(x.exp(), x.exp()),
            Func::Ln => self.chain(x.ln(), 1.0 / x),
            Func::Sqrt => {
                let s = x.sqrt();
                self.chain(s, 0.5 / s)
            }
            Func::Abs => self.chain(x.abs(), if x < 0.0 { -1.0 } else { 1.0 }),
        }
    }
    fn pow(self, e: Self) -> Self {
        let v = self.v.powf(e.v);
        let mut d = [0.0; 2];
        for k in 0..2 {
            if self.d[k] != 0.0 {
                d[k] += e.v * self.v.powf(e.v - 1.0) * self.d[k];
            }
            if e.d[k] != 0.0 {
                d[k] += v * self.v.ln() * e.d[k];
            }
        }
        Dual2 { v, d }
    }
}

fn eval_node<T: Scalar>(n: &Node, values: &[T]) -> T {
    match n {
        Node::Const(c) => T::constant(*c),
        Node::Var(i) => values[*i],
        Node::Neg(c) => -eval_node(c, values),
        Node::Call(f, a) => eval_node(a, values).apply(*f),
        Node::Bin(op, l, r) => {
            let (a, b) = (eval_node(l, values), eval_node(r, values));
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => a.pow(b),
            }
        }
    }
}
