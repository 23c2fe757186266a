//! Polynomial text grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power ('*' power)*
//! power  := atom ['^' integer]
//! atom   := integer ['/' integer] | identifier | '(' expr ')'
//! ```
//!
//! Whitespace is ignored and implicit multiplication is rejected.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{MultiPoly, Ring};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<Ring<F>>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly<F>> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<F>> {
        let mut acc = self.power()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        if let Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen) = self.peek() {
            return self.err("implicit multiplication is not allowed; use '*'");
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly<F>> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    let e: u32 = match u32::try_from(&e) {
                        Ok(e) if e <= u16::MAX as u32 => e,
                        _ => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly<F>> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut den = BigInt::from(1);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return self.err("zero denominator");
                            }
                            den = d;
                            self.pos += 1;
                        }
                        _ => return self.err("expected an integer denominator after '/'"),
                    }
                }
                let c = self.ring.field().from_rational(&BigRational::new(n, den))?;
                Ok(MultiPoly::constant(self.ring, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(MultiPoly::var(self.ring, i)),
                    None => Err(Error::UnknownVariable(name)),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Slash) => self.err("'/' is only allowed between integer literals"),
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` into a canonical polynomial of `ring`.
pub fn parse_poly<F: Field>(text: &str, ring: &Arc<Ring<F>>) -> Result<MultiPoly<F>> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty polynomial".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        ring,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn basic_shapes() {
        let r = Ring::new(Rationals, &["x", "y"]).unwrap();
        let c = parse_poly("x^2+y^2-1", &r).unwrap();
        assert_eq!(c.num_terms(), 3);
        assert_eq!(c.to_string(), "x^2 + y^2 - 1");
        assert!(parse_poly("0", &r).unwrap().is_zero());
        let h = parse_poly("-(x - 1/2)^2 + 3/4*x", &r).unwrap();
        assert_eq!(h.to_string(), "-x^2 + 7/4*x - 1/4");
    }

    #[test]
    fn example_objective_prefix() {
        let vars: Vec<String> = (1..=8).map(|i| format!("x{i}")).collect();
        let r = Ring::new(Rationals, &vars).unwrap();
        let p = parse_poly("x1^3 + 2*x2^3", &r).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.total_degree(), 3);
    }

    #[test]
    fn errors() {
        let r = Ring::new(Rationals, &["x", "y"]).unwrap();
        assert!(matches!(parse_poly("x+z", &r), Err(Error::UnknownVariable(v)) if v == "z"));
        assert!(matches!(parse_poly("2x", &r), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x^", &r), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x + (y", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x $ y", &r), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x/2", &r), Err(Error::Syntax { .. })));
        let p = Ring::new(PrimeField::new(7).unwrap(), &["x"]).unwrap();
        assert!(matches!(parse_poly("x/7", &p), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/7*x", &p), Err(Error::Coefficient(_))));
    }
}
