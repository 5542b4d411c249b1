//! Recursive-descent parser for rational-function expressions.
//!
//! Grammar (documented for the file formats):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ('-')? integer)?
//! primary := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers must be variables of the target ring or keys of the supplied
//! parameter map. Division requires the divisor to be a unit of the ring
//! (generator factors and nonzero constants); `y^-2` is accepted when `y`
//! is invertible.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::ring::{FnRing, RingElem};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            let c = bytes[self.pos] as char;
            let (line, col) = (self.line, self.col);
            match c {
                ' ' | '\t' => self.bump(1),
                '\n' => {
                    self.pos += 1;
                    self.line += 1;
                    self.col = 1;
                }
                '+' => self.push(&mut out, Tok::Plus, line, col),
                '-' => self.push(&mut out, Tok::Minus, line, col),
                '*' => self.push(&mut out, Tok::Star, line, col),
                '/' => self.push(&mut out, Tok::Slash, line, col),
                '^' => self.push(&mut out, Tok::Caret, line, col),
                '(' => self.push(&mut out, Tok::LParen, line, col),
                ')' => self.push(&mut out, Tok::RParen, line, col),
                '0'..='9' => {
                    let start = self.pos;
                    while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                        self.bump(1);
                    }
                    out.push((Tok::Int(self.src[start..self.pos].into()), line, col));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = self.pos;
                    while self.pos < bytes.len()
                        && ((bytes[self.pos] as char).is_ascii_alphanumeric()
                            || bytes[self.pos] == b'_')
                    {
                        self.bump(1);
                    }
                    out.push((Tok::Ident(self.src[start..self.pos].into()), line, col));
                }
                other => {
                    return Err(Error::parse(line, col, format!("unexpected character `{other}`")))
                }
            }
        }
        Ok(out)
    }

    fn push(&mut self, out: &mut Vec<(Tok, usize, usize)>, t: Tok, line: usize, col: usize) {
        out.push((t, line, col));
        self.bump(1);
    }

    fn bump(&mut self, n: usize) {
        self.pos += n;
        self.col += n;
    }
}

pub struct ExprParser<'a> {
    ring: &'a Arc<FnRing>,
    params: &'a BTreeMap<String, Rat>,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

/// Parse `src` as an element of `ring`, substituting `params` for free
/// parameter names.
pub fn parse_elem(
    src: &str,
    ring: &Arc<FnRing>,
    params: &BTreeMap<String, Rat>,
) -> Result<RingElem> {
    let toks = Lexer::new(src).tokens()?;
    let mut p = ExprParser {
        ring,
        params,
        toks,
        pos: 0,
    };
    let e = p.expr()?;
    if let Some((t, line, col)) = p.toks.get(p.pos) {
        return Err(Error::parse(*line, *col, format!("trailing input `{t:?}`")));
    }
    Ok(e)
}

/// Parse with no parameters.
pub fn parse_simple(src: &str, ring: &Arc<FnRing>) -> Result<RingElem> {
    parse_elem(src, ring, &BTreeMap::new())
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(&Tok::Slash) {
                let (line, col) = self.here();
                let divisor = self.unary()?;
                let inv = divisor.try_inv().map_err(|e| {
                    Error::parse(line, col, format!("divisor is not a unit: {e}"))
                })?;
                acc = acc.mul(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RingElem> {
        if self.eat(&Tok::Minus) {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RingElem> {
        let base = self.primary()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&Tok::Minus);
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.pos += 1;
                let k: i64 = digits
                    .parse()
                    .map_err(|_| Error::parse(line, col, "exponent out of range"))?;
                let k = if negative { -k } else { k };
                base.pow_i(k)
                    .map_err(|e| Error::parse(line, col, format!("cannot raise to {k}: {e}")))
            }
            _ => Err(Error::parse(line, col, "expected integer exponent after `^`")),
        }
    }

    fn primary(&mut self) -> Result<RingElem> {
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.pos += 1;
                let r: Rat = digits
                    .parse()
                    .map_err(|_| Error::parse(line, col, "invalid integer"))?;
                Ok(RingElem::constant(self.ring, r))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(j) = self.ring.var_index(&name) {
                    Ok(RingElem::var(self.ring, j))
                } else if let Some(v) = self.params.get(&name) {
                    Ok(RingElem::constant(self.ring, v.clone()))
                } else {
                    Err(Error::parse(
                        line,
                        col,
                        format!("unknown identifier `{name}`"),
                    ))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    let (l, c) = self.here();
                    return Err(Error::parse(l, c, "expected `)`"));
                }
                Ok(e)
            }
            _ => Err(Error::parse(line, col, "expected a value")),
        }
    }
}
