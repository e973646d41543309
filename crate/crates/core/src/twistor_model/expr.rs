//! Parser for polynomial expressions such as `x*y - z^2` or `(1+2i)*a^2 + 3/4*b`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, GaussRat, Rational};

use super::model::ConePolynomial;

type Poly = BTreeMap<Vec<u32>, GaussRat>;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/')
            {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(parse_rational(&text)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!(
                "unexpected character `{c}` in polynomial"
            )));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [String],
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        let entry = out.entry(e.clone()).or_insert_with(GaussRat::zero);
        *entry = entry.clone() + c.clone();
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(GaussRat::zero);
            *entry = entry.clone() + ca.clone() * cb.clone();
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.names.len()
    }

    fn constant(&self, c: GaussRat) -> Poly {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.insert(vec![0; self.n()], c);
        }
        p
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') {
            let t = self.term()?;
            mul(&self.constant(-GaussRat::one()), &t)
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = add(&acc, &self.term()?);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = add(&acc, &mul(&self.constant(-GaussRat::one()), &t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = mul(&acc, &self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(k)) if k.is_integer() && k >= Rational::zero() => {
                self.pos += 1;
                let k: u32 = k
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Parse("exponent too large".into()))?;
                let mut out = self.constant(GaussRat::one());
                for _ in 0..k {
                    out = mul(&out, &base);
                }
                Ok(out)
            }
            _ => Err(Error::Parse(
                "expected a nonnegative integer exponent".into(),
            )),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(q)) => {
                self.pos += 1;
                Ok(self.constant(GaussRat::new(q, Rational::zero())))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.names.iter().position(|n| *n == name) {
                    let mut e = vec![0; self.n()];
                    e[i] = 1;
                    Ok(Poly::from([(e, GaussRat::one())]))
                } else if name == "i" {
                    Ok(self.constant(GaussRat::i()))
                } else {
                    Err(Error::Parse(format!("unknown variable `{name}`")))
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a polynomial in the named variables.
pub fn parse_polynomial(expr: &str, names: &[String]) -> Result<ConePolynomial> {
    let mut p = Parser {
        tokens: tokenize(expr)?,
        pos: 0,
        names,
    };
    let poly = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in `{expr}`")));
    }
    Ok(ConePolynomial {
        terms: poly.into_iter().collect(),
    })
}
