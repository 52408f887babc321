//! Parser for scalars (`g+1`, `2*h^2+g`) and Laurent polynomials in θ and
//! θ^{-1} (`θ^2 + θ^{-1}`, `theta - theta^-3`, `1+T^-1`).
//!
//! Grammar:
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' exponent)?
//! atom   := integer | 'g' | 'h' | 'θ' | 'theta' | 'T' | '(' expr ')'
//! exponent := ['-'] integer | '{' ['-'] integer '}' | '(' ['-'] integer ')'
//! ```
//! Negative exponents are only allowed on monomials.

use crate::error::{Error, Result};
use crate::scalars::{Fe, Field};

use super::laurent::LaurentSeries;
use super::poly::ThetaPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    G,
    H,
    Theta,
    Plus,
    Minus,
    Star,
    Caret,
    Open(char),
    Close(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad integer {s}")))?));
                i = j;
                continue;
            }
            'g' => out.push(Tok::G),
            'h' => out.push(Tok::H),
            'θ' | 'T' => out.push(Tok::Theta),
            't' if chars[i..].iter().collect::<String>().starts_with("theta") => {
                out.push(Tok::Theta);
                i += 5;
                continue;
            }
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' | '{' => out.push(Tok::Open(c)),
            ')' | '}' => out.push(Tok::Close(c)),
            _ => return Err(Error::Parse(format!("unexpected character '{c}' in \"{src}\""))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    f: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<LaurentSeries> {
        let f = self.f;
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.next();
            self.term()?.neg(f)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?, f);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?, f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentSeries> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?, self.f);
                }
                Some(Tok::Num(_)) | Some(Tok::G) | Some(Tok::H) | Some(Tok::Theta) | Some(Tok::Open(_)) => {
                    acc = acc.mul(&self.factor()?, self.f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentSeries> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.next();
        let e = self.exponent()?;
        if e < 0 && base.coeffs().len() != 1 {
            return Err(Error::Parse("negative exponent on a non-monomial".into()));
        }
        base.pow_int(e, super::laurent::INF_PREC, self.f)
    }

    fn exponent(&mut self) -> Result<i64> {
        let grouped = matches!(self.peek(), Some(Tok::Open(_)));
        if grouped {
            self.next();
        }
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.next();
            true
        } else {
            false
        };
        let n = match self.next() {
            Some(Tok::Num(n)) => n,
            other => return Err(Error::Parse(format!("expected exponent, found {other:?}"))),
        };
        if grouped {
            match self.next() {
                Some(Tok::Close(_)) => {}
                other => return Err(Error::Parse(format!("expected closing bracket, found {other:?}"))),
            }
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<LaurentSeries> {
        let f = self.f;
        match self.next() {
            Some(Tok::Num(n)) => Ok(LaurentSeries::constant(f.from_int(n))),
            Some(Tok::G) => Ok(LaurentSeries::constant(f.gen_base())),
            Some(Tok::H) => Ok(LaurentSeries::constant(f.gen_ext())),
            Some(Tok::Theta) => Ok(LaurentSeries::theta_pow(1)),
            Some(Tok::Open(_)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::Close(_)) => Ok(inner),
                    other => Err(Error::Parse(format!("expected ')', found {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a Laurent polynomial in θ over E into an exact series.
pub fn parse_laurent(src: &str, f: &Field) -> Result<LaurentSeries> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, f };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in \"{src}\"")));
    }
    Ok(v)
}

/// Parses a polynomial in θ (no negative powers).
pub fn parse_poly(src: &str, f: &Field) -> Result<ThetaPoly> {
    let v = parse_laurent(src, f)?;
    if v.is_zero() {
        return Ok(ThetaPoly::zero());
    }
    let last = v.start() + v.coeffs().len() as i64 - 1;
    if last > 0 {
        return Err(Error::Parse(format!("\"{src}\" has negative powers of θ")));
    }
    let deg = -v.start();
    Ok(ThetaPoly::new((0..=deg).map(|d| v.coeff(-d).unwrap_or(Fe::ZERO)).collect()))
}

/// Parses an element of E.
pub fn parse_scalar(src: &str, f: &Field) -> Result<Fe> {
    let v = parse_laurent(src, f)?;
    if v.is_zero() {
        return Ok(Fe::ZERO);
    }
    if v.valuation() == Some(0) && v.coeffs().len() == 1 {
        return Ok(v.coeffs()[0]);
    }
    Err(Error::Parse(format!("\"{src}\" is not a field element")))
}
