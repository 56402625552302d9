//! Canonical rendering and parsing of polynomials.
//!
//! Rendering lists terms in descending order with explicit `*` and `^`,
//! e.g. `3*x1^2*Y2 - 1/2*x2`. The parser accepts that form and general
//! expressions with parentheses, `/` by nonzero constants and integer powers.

use std::fmt;

use num_bigint::BigInt;

use super::coeff::Coeff;
use super::poly::Poly;
use super::ring::RingRef;
use crate::error::{Error, Result};

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ring = self.ring();
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(abs.to_string());
            }
            for (i, e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(ring.var_name(i).to_string()),
                    _ => parts.push(format!("{}^{}", ring.var_name(i), e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = chars[st..i].iter().collect();
            out.push((Tok::Num(txt.parse().unwrap()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[st..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(Error::Syntax { col, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a RingRef,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { col: self.col(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly> {
        // summands are merged once at the end; pairwise merging is quadratic
        let first = self.term()?;
        let ring = first.ring().clone();
        let mut terms = first.terms().to_vec();
        while let Some(Tok::Op(c)) = self.peek() {
            let c = *c;
            if c != '+' && c != '-' {
                break;
            }
            self.pos += 1;
            let t = self.term()?;
            let t = if c == '+' { t } else { -t };
            terms.extend_from_slice(t.terms());
        }
        Ok(Poly::from_terms(&ring, terms))
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Op(c)) = self.peek() {
            let c = *c;
            if c != '*' && c != '/' {
                break;
            }
            self.pos += 1;
            let col = self.col();
            let f = self.factor()?;
            if c == '*' {
                acc = &acc * &f;
            } else {
                if !f.is_constant() || f.is_zero() {
                    return Err(Error::Syntax { col, msg: "division by a non-constant or zero".into() });
                }
                acc = acc.scale(&f.constant_term().inv());
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if let Some(Tok::Op('^')) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(n)) => {
                            self.pos += 1;
                            let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                            Ok(base.pow(e))
                        }
                        _ => self.err("expected a non-negative integer exponent"),
                    }
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.ring, self.ring.field().from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Poly::var_named(self.ring, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(t) => self.err(format!("unexpected token {}", describe(&t))),
            None => self.err("unexpected end of input"),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("`{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Op(c) => format!("`{c}`"),
    }
}

impl Poly {
    /// Parses `s` in `ring`. Errors carry a 1-based column.
    pub fn parse(ring: &RingRef, s: &str) -> Result<Poly> {
        let toks = lex(s)?;
        let mut p = Parser { ring, toks, pos: 0, end_col: s.chars().count() + 1 };
        if p.toks.is_empty() {
            return p.err("empty polynomial");
        }
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            let t = p.toks[p.pos].0.clone();
            return p.err(format!("unexpected token {}", describe(&t)));
        }
        Ok(e)
    }
}

/// Parses a rational or integer literal such as `-3/4` into a coefficient of `ring`.
pub fn parse_coeff(ring: &RingRef, s: &str) -> Result<Coeff> {
    let p = Poly::parse(ring, s)?;
    if !p.is_constant() {
        return Err(Error::Syntax { col: 1, msg: "expected a constant".into() });
    }
    Ok(p.constant_term())
}
