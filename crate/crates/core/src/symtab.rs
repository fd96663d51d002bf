//! Named coordinate vectors and a tiny linear-expression language.
//!
//! Lattice generators are defined by formulas like
//! `(x - y - e1 + e2 - f1 + f2)/3`; transcribing them as text and parsing
//! exactly keeps the data tables readable and diffable against their
//! sources. Expressions combine previously defined symbols with integer
//! coefficients, parentheses, and division by integers.

use crate::error::{CoreError, Result};
use crate::lattice::{vadd, vscale};
use k3lab_linalg::{rat_int, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Ordered table of named vectors over a fixed coordinate frame.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    pub label: String,
    pub dim: usize,
    names: Vec<String>,
    vecs: Vec<Vec<Rat>>,
    index: BTreeMap<String, usize>,
}

impl SymbolTable {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        SymbolTable {
            label: label.into(),
            dim,
            names: Vec::new(),
            vecs: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn define(&mut self, name: &str, v: Vec<Rat>) -> Result<()> {
        if v.len() != self.dim {
            return Err(CoreError::Inconsistent(format!(
                "symbol {name} in {} has length {} instead of {}",
                self.label,
                v.len(),
                self.dim
            )));
        }
        if self.index.contains_key(name) {
            return Err(CoreError::Inconsistent(format!(
                "symbol {name} defined twice in {}",
                self.label
            )));
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        self.vecs.push(v);
        Ok(())
    }

    /// Define `name` as the i-th standard basis vector of the frame.
    pub fn unit(&mut self, name: &str, i: usize) -> Result<()> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = rat_int(1);
        self.define(name, v)
    }

    /// Define consecutive unit symbols starting at coordinate `start`.
    pub fn units(&mut self, names: &[&str], start: usize) -> Result<()> {
        for (k, name) in names.iter().enumerate() {
            self.unit(name, start + k)?;
        }
        Ok(())
    }

    /// Define `name` by a linear expression over existing symbols.
    pub fn define_expr(&mut self, name: &str, expr: &str) -> Result<()> {
        let v = self.eval(expr)?;
        self.define(name, v)
    }

    pub fn get(&self, name: &str) -> Result<&[Rat]> {
        match self.index.get(name) {
            Some(&i) => Ok(&self.vecs[i]),
            None => Err(CoreError::UnknownSymbol {
                entry: self.label.clone(),
                symbol: name.to_string(),
            }),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Rat])> {
        self.names.iter().map(|n| n.as_str()).zip(self.vecs.iter().map(|v| v.as_slice()))
    }

    /// Evaluate a linear expression to a coordinate vector.
    pub fn eval(&self, expr: &str) -> Result<Vec<Rat>> {
        let toks = tokenize(expr, &self.label)?;
        let mut p = Parser { toks, pos: 0, st: self, src: expr };
        let v = p.expr()?;
        p.expect_end()?;
        match v {
            Value::Vector(v) => Ok(v),
            Value::Scalar(_) => Err(CoreError::Inconsistent(format!(
                "expression `{expr}` in {} is a pure scalar",
                self.label
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// expression parser
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str, label: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut n: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n * 10 + v as i64;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Int(n));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(name));
            }
            other => {
                return Err(CoreError::Inconsistent(format!(
                    "unexpected character `{other}` in expression for {label}"
                )));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Rat),
    Vector(Vec<Rat>),
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    st: &'a SymbolTable,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn bad(&self, what: &str) -> CoreError {
        CoreError::Inconsistent(format!(
            "{} in expression `{}` for {}",
            what, self.src, self.st.label
        ))
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.bad("trailing tokens"))
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                neg(self.term()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = add(acc, self.term()?).map_err(|w| self.bad(&w))?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = add(acc, neg(self.term()?)).map_err(|w| self.bad(&w))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = mul(acc, rhs).map_err(|w| self.bad(&w))?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = divide(acc, rhs).map_err(|w| self.bad(&w))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Value> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Value::Scalar(rat_int(n))),
            Some(Tok::Ident(name)) => Ok(Value::Vector(self.st.get(&name)?.to_vec())),
            Some(Tok::Minus) => Ok(neg(self.factor()?)),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(self.bad("missing closing parenthesis")),
                }
            }
            _ => Err(self.bad("expected a number, symbol, or parenthesis")),
        }
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(-s),
        Value::Vector(v) => Value::Vector(v.into_iter().map(|x| -x).collect()),
    }
}

fn add(a: Value, b: Value) -> std::result::Result<Value, String> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x + y)),
        (Value::Vector(x), Value::Vector(y)) => {
            if x.len() != y.len() {
                return Err("vector length mismatch".into());
            }
            Ok(Value::Vector(vadd(&x, &y)))
        }
        _ => Err("cannot add a scalar to a vector".into()),
    }
}

fn mul(a: Value, b: Value) -> std::result::Result<Value, String> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x * y)),
        (Value::Scalar(s), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(s)) => {
            Ok(Value::Vector(vscale(&v, &s)))
        }
        _ => Err("cannot multiply two vectors".into()),
    }
}

fn divide(a: Value, b: Value) -> std::result::Result<Value, String> {
    let s = match b {
        Value::Scalar(s) => s,
        Value::Vector(_) => return Err("cannot divide by a vector".into()),
    };
    if s.is_zero() {
        return Err("division by zero".into());
    }
    match a {
        Value::Scalar(x) => Ok(Value::Scalar(x / s)),
        Value::Vector(v) => {
            let inv = rat_int(1) / s;
            Ok(Value::Vector(vscale(&v, &inv)))
        }
    }
}
