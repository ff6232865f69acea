//! Expression syntax for ring elements.
//!
//! ```text
//! expr   := sign? term (("+" | "-") term)*
//! term   := coeff ("*" factor)* | factor ("*" factor)*
//! factor := name ("^" "-"? int)?
//! coeff  := int | int "/" int
//! ```
//! Whitespace is insignificant. Factors are multiplied left to right with
//! Koszul signs, so `nu*eta` with both odd parses as `-eta*nu`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::element::{Monomial, RingElement};
use super::monomial_product;
use crate::error::{Error, Result};
use crate::ground::{GroundRing, Scalar};

pub(crate) struct Signature<'a> {
    pub names: &'a [String],
    pub odd: &'a [bool],
    pub ground: &'a GroundRing,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    sig: &'a Signature<'a>,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax { line: 1, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn name(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        if s.is_empty() || s.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            self.pos = start;
            return Err(self.err("expected a generator name"));
        }
        self.sig.names.iter().position(|n| *n == s).ok_or_else(|| {
            self.pos = start;
            self.err(format!("unknown generator {s:?}"))
        })
    }

    fn factor(&mut self) -> Result<Monomial> {
        let i = self.name()?;
        let mut e = 1i64;
        if self.eat('^') {
            let paren = self.eat('(');
            let neg = self.eat('-');
            let n = self.integer()?;
            if paren && !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            e = i64::try_from(n).map_err(|_| self.err("exponent out of range"))?;
            if neg {
                e = -e;
            }
        }
        Ok(Monomial::generator(self.sig.names.len(), i, e))
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let n = self.sig.names.len();
        let mut coeff = BigRational::one();
        let mut mono = Monomial::one(n);
        let mut first = true;
        loop {
            if first && self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let num = self.integer()?;
                let value = if self.eat('/') {
                    let den = self.integer()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                coeff = self.sig.ground.embed(&value).map_err(|_| self.err(format!("coefficient {value} is not in {}", self.sig.ground)))?;
            } else {
                let f = self.factor()?;
                let (m, negate) = monomial_product(&mono, &f, self.sig.odd);
                mono = m;
                if negate {
                    coeff = -coeff;
                }
            }
            first = false;
            if !self.eat('*') {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn expr(&mut self) -> Result<RingElement> {
        let k = self.sig.ground;
        let mut terms = Vec::new();
        let mut negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (m, c) = self.term()?;
            let c = k.embed(&if negate { -c } else { c }).map_err(|e| self.err(e.to_string()))?;
            terms.push((m, c));
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.err(format!("unexpected character {:?}", self.chars[self.pos])));
        }
        Ok(RingElement::from_terms(terms, |a, b| k.add(a, b)))
    }
}

pub(crate) fn parse(text: &str, sig: &Signature<'_>) -> Result<RingElement> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, sig };
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    p.expr()
}

pub(crate) fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .zip(names)
        .filter(|(e, _)| **e != 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub(crate) fn format(e: &RingElement, names: &[String], ground: &GroundRing) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().enumerate() {
        // prime-field coefficients print as-is; they are never negative
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_monomial(m, names);
        if m.is_one() {
            out.push_str(&ground.format(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&ground.format(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}
