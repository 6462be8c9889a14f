//! Recursive-descent parser for dimension expressions such as
//! `sqrt(E/x^3) * t^(1/2)` and identities `lhs = rhs`.
//!
//! ```text
//! identity := expr '=' expr
//! expr     := power (('*' | '/') power)*
//! power    := atom ('^' exponent)?
//! atom     := NAME | NUMBER | '(' expr ')' | 'sqrt' '(' expr ')'
//! exponent := INT | '-' INT | '(' '-'? INT ('/' INT)? ')'
//! ```
//! Numbers are dimensionless.

use num_rational::Rational64;
use serde::Serialize;

use super::{check_identity, Dimension, IdentityReport, QuantityCatalog};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Name(String),
    Number(String),
    Star,
    Slash,
    Caret,
    Minus,
    LParen,
    RParen,
    Equals,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '*' | '·' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '-' => Token::Minus,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '=' => Token::Equals,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                out.push((start, Token::Number(chars[start..i].iter().collect())));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Token::Name(chars[start..i].iter().collect())));
                continue;
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} at {start}"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    catalog: &'a QuantityCatalog,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(usize::MAX, |(o, _)| *o)
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        match self.tokens.get(self.pos) {
            Some((o, t)) => Err(Error::Parse(format!("expected {what} at {o}, found {t:?}"))),
            None => Err(Error::Parse(format!("expected {what}, found end of input"))),
        }
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn expr(&mut self) -> Result<Dimension> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    acc = acc / self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Dimension> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        let negative = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Token::Number(s)) => {
                let v: i64 = s.parse().map_err(|_| Error::Parse(format!("exponent {s:?} is not an integer")))?;
                Ok(if negative { -v } else { v })
            }
            _ => {
                self.pos -= 1;
                self.fail("an integer exponent")
            }
        }
    }

    fn exponent(&mut self) -> Result<Rational64> {
        if self.peek() == Some(&Token::LParen) {
            self.pos += 1;
            let num = self.integer()?;
            let den = if self.peek() == Some(&Token::Slash) {
                self.pos += 1;
                self.integer()?
            } else {
                1
            };
            self.expect(Token::RParen, "')'")?;
            if den == 0 {
                return Err(Error::Parse("zero denominator in exponent".into()));
            }
            Ok(Rational64::new(num, den))
        } else {
            Ok(Rational64::from_integer(self.integer()?))
        }
    }

    fn atom(&mut self) -> Result<Dimension> {
        let at = self.offset();
        match self.next() {
            Some(Token::Number(s)) => {
                s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?} at {at}")))?;
                Ok(Dimension::DIMENSIONLESS)
            }
            Some(Token::Name(n)) if n == "sqrt" => {
                self.expect(Token::LParen, "'(' after sqrt")?;
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner.sqrt())
            }
            Some(Token::Name(n)) => self.catalog.get(&n),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                self.fail("a quantity, number or '('")
            }
        }
    }
}

fn parser<'a>(text: &str, catalog: &'a QuantityCatalog) -> Result<Parser<'a>> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(Parser { tokens, pos: 0, catalog })
}

pub fn parse_expression(text: &str, catalog: &QuantityCatalog) -> Result<Dimension> {
    let mut p = parser(text, catalog)?;
    let d = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.fail("end of expression");
    }
    Ok(d)
}

/// A parsed and evaluated `lhs = rhs` identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Identity {
    pub text: String,
    #[serde(flatten)]
    pub report: IdentityReport,
}

pub fn parse_identity(text: &str, catalog: &QuantityCatalog) -> Result<Identity> {
    let mut p = parser(text, catalog)?;
    let lhs = p.expr()?;
    p.expect(Token::Equals, "'='")?;
    let rhs = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.fail("end of identity");
    }
    Ok(Identity { text: text.trim().to_string(), report: check_identity(lhs, rhs) })
}
