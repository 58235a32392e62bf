//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' exponent)?
//! exponent := INTEGER | PARAMETER
//! atom   := INTEGER | IDENT | '(' expr ')'
//! ```
//! Division is by nonzero constants only. Offsets are byte offsets into the input.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::ParseError;
use crate::exactalg::{Poly, Rat};

/// Exponents above this are rejected.
pub const MAX_EXPONENT: u32 = 256;

/// Names visible to the parser: variables in order, then integer parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseContext {
    vars: Vec<String>,
    params: Vec<(String, Option<i64>)>,
}

impl ParseContext {
    pub fn new(vars: Vec<String>) -> Self {
        ParseContext { vars, params: Vec::new() }
    }

    /// Context with variables `x1..xn`.
    pub fn coordinates(n: usize) -> Self {
        ParseContext::new(Poly::default_names(n, 0))
    }

    /// Declares a parameter; `None` leaves it unbound.
    pub fn with_param(mut self, name: &str, value: Option<i64>) -> Self {
        self.params.retain(|(p, _)| p != name);
        self.params.push((name.to_string(), value));
        self
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn param(&self, name: &str) -> Option<Option<i64>> {
        self.params.iter().find(|(p, _)| p == name).map(|(_, v)| *v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn err(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError { offset, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'e' || bytes[i] == b'E') {
                return Err(err(start, "decimal literals are not supported; write a/b"));
            }
            let digits = &text[start..i];
            out.push((start, Tok::Int(digits.parse().expect("ascii digits"))));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*/^()".contains(&c) {
            out.push((i, Tok::Op(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(err(i, format!("unexpected character '{ch}'")));
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn nvars(&self) -> usize {
        self.ctx.vars.len()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let at = self.offset();
            let rhs = self.unary()?;
            if c == '*' {
                acc = &acc * &rhs;
            } else {
                let d = rhs.constant_value().ok_or_else(|| err(at, "division by a non-constant"))?;
                if d.is_zero() {
                    return Err(err(at, "division by zero"));
                }
                acc = acc.scale(&(Rat::from_integer(1.into()) / d));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        Ok(base.pow(e))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let (at, tok) = self.bump();
        let value: BigInt = match tok {
            Tok::Int(v) => v,
            Tok::Ident(name) => match self.ctx.param(&name) {
                Some(Some(v)) => v.into(),
                Some(None) => return Err(err(at, format!("parameter {name} requires a value"))),
                None if self.ctx.vars.contains(&name) => {
                    return Err(err(at, format!("exponent must be a nonnegative integer, found variable {name}")))
                }
                None => return Err(err(at, format!("unknown identifier '{name}'"))),
            },
            Tok::Op('-') => return Err(err(at, "exponent must be a nonnegative integer")),
            Tok::Op('(') => return Err(err(at, "exponent must be an integer literal or parameter")),
            Tok::Op(c) => return Err(err(at, format!("expected an exponent, found '{c}'"))),
            Tok::End => return Err(err(at, "expected an exponent")),
        };
        match value.to_u32() {
            Some(e) if e <= MAX_EXPONENT => Ok(e),
            _ if value < BigInt::zero() => Err(err(at, "exponent must be a nonnegative integer")),
            _ => Err(err(at, format!("exponent exceeds {MAX_EXPONENT}"))),
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let (at, tok) = self.bump();
        match tok {
            Tok::Int(v) => Ok(Poly::constant(Rat::from_integer(v), self.nvars())),
            Tok::Ident(name) => {
                if let Some(i) = self.ctx.vars.iter().position(|v| *v == name) {
                    return Ok(Poly::var(i, self.nvars()));
                }
                match self.ctx.param(&name) {
                    Some(Some(v)) => Ok(Poly::constant(Rat::from_integer(v.into()), self.nvars())),
                    Some(None) => Err(err(at, format!("parameter {name} requires a value"))),
                    None => Err(err(at, format!("unknown identifier '{name}'"))),
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                match self.bump() {
                    (_, Tok::Op(')')) => Ok(inner),
                    (o, _) => Err(err(o, "expected ')'")),
                }
            }
            Tok::Op(')') => Err(err(at, "unexpected ')'")),
            Tok::Op(c) => Err(err(at, format!("expected an expression, found '{c}'"))),
            Tok::End => Err(err(at, "expected an expression")),
        }
    }
}

/// Parses `text` into a canonical polynomial over the context's variables.
pub fn parse_poly(text: &str, ctx: &ParseContext) -> Result<Poly, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, ctx };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Op(')') => Err(err(p.offset(), "unmatched ')'")),
        Tok::Ident(_) | Tok::Int(_) | Tok::Op('(') => {
            Err(err(p.offset(), "expected an operator; implicit multiplication is not allowed"))
        }
        Tok::Op(c) => Err(err(p.offset(), format!("unexpected '{c}'"))),
    }
}

/// Parses a constant rational such as `-3/2`.
pub fn parse_rational(text: &str, ctx: &ParseContext) -> Result<Rat, ParseError> {
    let p = parse_poly(text, &ParseContext { vars: Vec::new(), params: ctx.params.clone() })?;
    p.constant_value().ok_or_else(|| err(0, "expected a constant"))
}
