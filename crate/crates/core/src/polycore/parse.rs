//! Text syntax for polynomials: integer or rational coefficients, `^`
//! powers (negative powers allowed on inverted variables), explicit `*` or
//! juxtaposition for products, e.g. `x^2*(x-1)*v + y*u^2 - x`.

use super::{Monomial, Polynomial, Rat, Ring};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
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
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let (line, col) = (self.line, self.col);
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.bump();
                }
                b'0'..=b'9' => {
                    let mut digits = String::new();
                    while let Some(d @ b'0'..=b'9') = self.peek() {
                        digits.push(d as char);
                        self.bump();
                    }
                    let n: BigInt = digits.parse().expect("digit string");
                    out.push((Tok::Int(n), line, col));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let mut name = String::new();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_alphanumeric() || d == b'_' {
                            name.push(d as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(name), line, col));
                }
                b'+' => {
                    self.bump();
                    out.push((Tok::Plus, line, col));
                }
                b'-' => {
                    self.bump();
                    out.push((Tok::Minus, line, col));
                }
                b'*' => {
                    self.bump();
                    out.push((Tok::Star, line, col));
                }
                b'/' => {
                    self.bump();
                    out.push((Tok::Slash, line, col));
                }
                b'^' => {
                    self.bump();
                    out.push((Tok::Caret, line, col));
                }
                b'(' => {
                    self.bump();
                    out.push((Tok::LParen, line, col));
                }
                b')' => {
                    self.bump();
                    out.push((Tok::RParen, line, col));
                }
                other => {
                    return Err(self.error(format!("unexpected character `{}`", other as char)))
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'r> {
    ring: &'r Ring,
    toks: Vec<(Tok, usize, usize)>,
    idx: usize,
}

impl<'r> Parser<'r> {
    fn error_at(&self, message: impl Into<String>) -> Error {
        let (line, column) = self
            .toks
            .get(self.idx)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|(_, l, c)| (*l, *c + 1))
                    .unwrap_or((1, 1))
            });
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.idx += 1;
                }
                Tok::Minus => {
                    negate = !negate;
                    self.idx += 1;
                }
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(tok) = self.peek() {
            match tok.clone() {
                Tok::Plus => {
                    self.idx += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Tok::Minus => {
                    self.idx += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let f = self.factor()?;
                    let c = f
                        .constant_value()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| self.error_at("division only by nonzero constants"))?;
                    acc = acc.scale(&c.recip());
                }
                // juxtaposition is multiplication
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let mut base = self.primary()?;
        while let Some(Tok::Caret) = self.peek() {
            self.idx += 1;
            let e = self.exponent()?;
            base = if e >= 0 {
                base.pow(e as u32)?
            } else {
                let inv = super::invert_unit(&base)
                    .ok_or_else(|| self.error_at("negative power of a non-unit"))?;
                inv.pow((-e) as u32)?
            };
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32> {
        match self.next() {
            Some(Tok::Int(n)) => int_to_i32(&n).ok_or_else(|| self.error_at("exponent too large")),
            Some(Tok::Minus) => match self.next() {
                Some(Tok::Int(n)) => int_to_i32(&n)
                    .map(|e| -e)
                    .ok_or_else(|| self.error_at("exponent too large")),
                _ => Err(self.error_at("expected integer exponent")),
            },
            Some(Tok::LParen) => {
                let mut neg = false;
                if let Some(Tok::Minus) = self.peek() {
                    neg = true;
                    self.idx += 1;
                }
                let n = match self.next() {
                    Some(Tok::Int(n)) => {
                        int_to_i32(&n).ok_or_else(|| self.error_at("exponent too large"))?
                    }
                    _ => return Err(self.error_at("expected integer exponent")),
                };
                match self.next() {
                    Some(Tok::RParen) => Ok(if neg { -n } else { n }),
                    _ => Err(self.error_at("expected `)` after exponent")),
                }
            }
            _ => Err(self.error_at("expected exponent")),
        }
    }

    fn primary(&mut self) -> Result<Polynomial> {
        let here = self
            .toks
            .get(self.idx)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1));
        match self.next() {
            Some(Tok::Int(n)) => Ok(Polynomial::constant(
                self.ring,
                Rat::from_integer(n),
            )),
            Some(Tok::Ident(name)) => {
                let idx = self.ring.var_index(&name).map_err(|_| Error::Parse {
                    line: here.0,
                    column: here.1,
                    message: format!("unknown variable `{name}`"),
                })?;
                Ok(Polynomial::monomial(
                    self.ring,
                    Monomial::var(self.ring.num_vars(), idx),
                    Rat::one(),
                )?)
            }
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.error_at("expected `)`")),
                }
            }
            _ => Err(self.error_at("expected a number, variable, or `(`")),
        }
    }
}

fn int_to_i32(n: &BigInt) -> Option<i32> {
    use num_traits::ToPrimitive;
    n.to_i32()
}

pub fn parse_polynomial(ring: &Ring, src: &str) -> Result<Polynomial> {
    let toks = Lexer::new(src).tokens()?;
    if toks.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty polynomial".into(),
        });
    }
    let mut parser = Parser {
        ring,
        toks,
        idx: 0,
    };
    let p = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return Err(parser.error_at("trailing input"));
    }
    // reject negative exponents on non-inverted variables
    Polynomial::from_terms(ring, p.terms().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{MonomialOrder, RingDescriptor};

    #[test]
    fn juxtaposition_and_rationals() {
        let r = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
        let a = parse_polynomial(&r, "3/2 x (x - 1) y").unwrap();
        let b = parse_polynomial(&r, "3/2*x^2*y - 3/2*x*y").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_location() {
        let r = RingDescriptor::new(vec!["x"], MonomialOrder::Lex);
        match parse_polynomial(&r, "x + q") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(column, 5);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn laurent_requires_inverted() {
        let r = RingDescriptor::new(vec!["x"], MonomialOrder::Lex);
        assert!(parse_polynomial(&r, "x^-1").is_err());
        let r = RingDescriptor::with_inverted(vec!["x"], vec!["x"], MonomialOrder::Lex);
        let p = parse_polynomial(&r, "x^-1").unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].0 .0, vec![-1]);
    }
}
