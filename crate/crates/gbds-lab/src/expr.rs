//! Parsing and printing of algebra expressions.
//!
//! Grammar (whitespace insensitive):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := int | '(' expr ')'
//!         | 'p' set                  // projection p_A
//!         | 's' '{' word ',' set '}'   // generator s_{α,A}
//!         | 'S' '{' word ',' set '}'   // adjoint s*_{α,A}
//! set    := '[' name* ']'
//! ```
//! Integers act as scalars; a bare integer other than zero cannot be added
//! to an algebra element (the algebra need not be unital).

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, AlgebraError, Monomial, Ring};
use crate::system::DynamicalSystem;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("unexpected character {0:?} at byte {1}")]
    BadChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected {expected} but found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown letter {0}")]
    UnknownLetter(String),
    #[error("a nonzero scalar cannot stand alone in a sum (the algebra has no unit)")]
    BareScalar,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Name(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '{' | '}' | '[' | ']' | '(' | ')' | ',' | '+' | '-' | '*' => {
                chars.next();
                out.push(match c {
                    '{' => Token::LBrace,
                    '}' => Token::RBrace,
                    '[' => Token::LBracket,
                    ']' => Token::RBracket,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    ',' => Token::Comma,
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    _ => Token::Star,
                });
            }
            '0'..='9' => {
                let mut n = 0i64;
                while let Some(&(_, d)) = chars.peek() {
                    match d.to_digit(10) {
                        Some(d) => {
                            n = n * 10 + d as i64;
                            chars.next();
                        }
                        None => break,
                    }
                }
                out.push(Token::Int(n));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Name(name));
            }
            other => return Err(ExprError::BadChar(other, pos)),
        }
    }
    Ok(out)
}

/// Either a scalar or an algebra element; scalars act by scaling under `*`.
enum Value<R: Ring> {
    Scalar(i64),
    Elem(AlgebraElement<R>),
}

struct Parser<'a, 's, R: Ring> {
    tokens: Vec<Token>,
    pos: usize,
    alg: &'a Algebra<'s, R>,
}

impl<'a, 's, R: Ring> Parser<'a, 's, R> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, ExprError> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or(ExprError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Token, name: &'static str) -> Result<(), ExprError> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(ExprError::Unexpected {
                expected: name,
                found: format!("{t:?}"),
            })
        }
    }

    fn parse_set(&mut self) -> Result<u32, ExprError> {
        self.expect(Token::LBracket, "'['")?;
        let mut m = 0;
        loop {
            match self.next()? {
                Token::RBracket => return Ok(m),
                Token::Name(n) => {
                    let v = self
                        .alg
                        .system()
                        .gba()
                        .vertex(&n)
                        .ok_or(ExprError::UnknownVertex(n))?;
                    m |= 1 << v;
                }
                other => {
                    return Err(ExprError::Unexpected {
                        expected: "vertex name or ']'",
                        found: format!("{other:?}"),
                    })
                }
            }
        }
    }

    /// Splits a brace word such as "ab" into alphabet letters by greedy
    /// longest match over the letter names.
    fn split_word(&self, word: &str) -> Result<Vec<usize>, ExprError> {
        let names = self.alg.system().alphabet();
        let mut rest = word;
        let mut out = Vec::new();
        while !rest.is_empty() {
            let hit = (0..names.len())
                .filter(|&l| rest.starts_with(names[l].as_str()))
                .max_by_key(|&l| names[l].len());
            match hit {
                Some(l) => {
                    out.push(l);
                    rest = &rest[names[l].len()..];
                }
                None => return Err(ExprError::UnknownLetter(word.to_string())),
            }
        }
        if out.is_empty() {
            return Err(ExprError::UnknownLetter(word.to_string()));
        }
        Ok(out)
    }

    fn parse_generator(&mut self, starred: bool) -> Result<AlgebraElement<R>, ExprError> {
        self.expect(Token::LBrace, "'{'")?;
        let word = match self.next()? {
            Token::Name(n) => self.split_word(&n)?,
            other => {
                return Err(ExprError::Unexpected {
                    expected: "letter word",
                    found: format!("{other:?}"),
                })
            }
        };
        self.expect(Token::Comma, "','")?;
        let set = self.parse_set()?;
        self.expect(Token::RBrace, "'}'")?;
        // s_{α,A} is the product of the letter generators along α, with
        // the final factor carrying A; the star is applied to the whole.
        let mut e: Option<AlgebraElement<R>> = None;
        let last = word.len() - 1;
        for (i, &l) in word.iter().enumerate() {
            let a = if i == last {
                set
            } else {
                self.alg.system().ideal(l).max()
            };
            let f = self.alg.inject_s(l, a, false)?;
            e = Some(match e {
                None => f,
                Some(e) => self.alg.mul(&e, &f)?,
            });
        }
        let e = e.expect("nonempty word");
        Ok(if starred { self.alg.star(&e) } else { e })
    }

    fn parse_factor(&mut self) -> Result<Value<R>, ExprError> {
        match self.next()? {
            Token::Int(n) => Ok(Value::Scalar(n)),
            Token::LParen => {
                let v = self.parse_expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(v)
            }
            Token::Name(n) if n == "p" => {
                let set = self.parse_set()?;
                Ok(Value::Elem(self.alg.inject_p(set)?))
            }
            Token::Name(n) if n == "s" => Ok(Value::Elem(self.parse_generator(false)?)),
            Token::Name(n) if n == "S" => Ok(Value::Elem(self.parse_generator(true)?)),
            other => Err(ExprError::Unexpected {
                expected: "integer, '(', 'p', 's', or 'S'",
                found: format!("{other:?}"),
            }),
        }
    }

    fn mul(&self, a: Value<R>, b: Value<R>) -> Result<Value<R>, ExprError> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (Value::Scalar(x), Value::Elem(e)) | (Value::Elem(e), Value::Scalar(x)) => {
                Value::Elem(self.alg.scale(&self.alg.ring().from_i64(x), &e))
            }
            (Value::Elem(a), Value::Elem(b)) => Value::Elem(self.alg.mul(&a, &b)?),
        })
    }

    fn add(&self, a: Value<R>, b: Value<R>, sub: bool) -> Result<Value<R>, ExprError> {
        let to_elem = |v: Value<R>| -> Result<AlgebraElement<R>, ExprError> {
            match v {
                Value::Scalar(0) => Ok(self.alg.zero()),
                Value::Scalar(_) => Err(ExprError::BareScalar),
                Value::Elem(e) => Ok(e),
            }
        };
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x - y } else { x + y }),
            (a, b) => {
                let (a, b) = (to_elem(a)?, to_elem(b)?);
                Value::Elem(if sub {
                    self.alg.sub(&a, &b)
                } else {
                    self.alg.add(&a, &b)
                })
            }
        })
    }

    fn parse_term(&mut self) -> Result<Value<R>, ExprError> {
        let mut v = self.parse_factor()?;
        while self.peek() == Some(&Token::Star) {
            self.next()?;
            let rhs = self.parse_factor()?;
            v = self.mul(v, rhs)?;
        }
        Ok(v)
    }

    fn parse_expr(&mut self) -> Result<Value<R>, ExprError> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.next()?;
            negate = true;
        }
        let mut v = self.parse_term()?;
        if negate {
            v = self.mul(Value::Scalar(-1), v)?;
        }
        loop {
            match self.peek() {
                Some(&Token::Plus) | Some(&Token::Minus) => {
                    let sub = self.next()? == Token::Minus;
                    let rhs = self.parse_term()?;
                    v = self.add(v, rhs, sub)?;
                }
                _ => return Ok(v),
            }
        }
    }
}

/// Parses an expression and returns its normal form in the given algebra.
pub fn parse<'s, R: Ring>(alg: &Algebra<'s, R>, src: &str) -> Result<AlgebraElement<R>, ExprError> {
    let mut p = Parser {
        tokens: tokenize(src)?,
        pos: 0,
        alg,
    };
    let v = p.parse_expr()?;
    if p.pos != p.tokens.len() {
        return Err(ExprError::Unexpected {
            expected: "end of expression",
            found: format!("{:?}", p.tokens[p.pos]),
        });
    }
    match v {
        Value::Scalar(0) => Ok(alg.zero()),
        Value::Scalar(_) => Err(ExprError::BareScalar),
        Value::Elem(e) => Ok(e),
    }
}

fn render_word(sys: &DynamicalSystem, w: &[usize]) -> String {
    w.iter().map(|&l| sys.alphabet()[l].as_str()).collect()
}

pub fn render_monomial(sys: &DynamicalSystem, m: &Monomial) -> String {
    let set = sys.gba().render(m.atom);
    match (m.alpha.is_empty(), m.beta.is_empty()) {
        (true, true) => format!("p{set}"),
        (false, true) => format!("s{{{},{set}}}", render_word(sys, &m.alpha)),
        (true, false) => format!("S{{{},{set}}}", render_word(sys, &m.beta)),
        (false, false) => format!(
            "s{{{},{set}}}*S{{{},{set}}}",
            render_word(sys, &m.alpha),
            render_word(sys, &m.beta)
        ),
    }
}

/// Renders a normal form; terms in canonical monomial order. The output
/// reparses to the same element over the integer ring.
pub fn render<R: Ring>(alg: &Algebra<'_, R>, e: &AlgebraElement<R>) -> String
where
    R::Elem: std::fmt::Display,
{
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().iter().enumerate() {
        let coeff = c.to_string();
        let (sign, mag) = match coeff.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("+", coeff),
        };
        if i == 0 {
            if sign == "-" {
                out.push_str("- ");
            }
        } else {
            write!(out, " {sign} ").unwrap();
        }
        if mag != "1" {
            write!(out, "{mag}*").unwrap();
        }
        out.push_str(&render_monomial(alg.system(), m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, IntRing, ModRing};
    use crate::fixtures::{fix1, fix2};

    #[test]
    fn spec_example_normalizes_to_projection() {
        let sys = fix1(true);
        let alg = Algebra::new(&sys, IntRing);
        let e = parse(&alg, "S{a,[v2]}*s{a,[v2]}").unwrap();
        assert_eq!(render(&alg, &e), "p[v2]");
    }

    #[test]
    fn arithmetic_and_parentheses() {
        let sys = fix1(true);
        let alg = Algebra::new(&sys, IntRing);
        let e = parse(&alg, "2*p[v1 v2] - p[v1] + 0").unwrap();
        let f = parse(&alg, "p[v1] + 2*p[v2]").unwrap();
        assert!(alg.equal(&e, &f).unwrap());
        let g = parse(&alg, "(p[v1] + p[v2]) * s{a,[v2]}").unwrap();
        let h = parse(&alg, "p[v1 v2]*s{a,[v2]}").unwrap();
        assert!(alg.equal(&g, &h).unwrap());
        assert!(parse(&alg, "p[v1] + 1").is_err());
        assert!(parse(&alg, "p[v3]").is_err());
        assert!(parse(&alg, "s{z,[v2]}").is_err());
        assert!(parse(&alg, "p[v1] p[v2]").is_err());
        let neg = parse(&alg, "-p[v1]").unwrap();
        assert!(alg
            .equal(&neg, &alg.neg(&alg.inject_p(0b01).unwrap()))
            .unwrap());
    }

    #[test]
    fn render_round_trips() {
        let sys = fix2();
        let alg = Algebra::new(&sys, IntRing);
        for src in [
            "p[v1 v2]",
            "s{a,[v2]} - 3*S{b,[v3]}",
            "s{a,[v1 v2]}*S{a,[v2]}",
            "p[v1] - p[v2] + 2*p[v3]",
            "0",
        ] {
            let e = parse(&alg, src).unwrap();
            let text = render(&alg, &e);
            let back = parse(&alg, &text).unwrap();
            assert!(alg.equal(&e, &back).unwrap(), "{src} → {text}");
        }
    }

    #[test]
    fn modular_ring_coefficients() {
        let sys = fix1(true);
        let alg = Algebra::new(&sys, ModRing(3));
        let e = parse(&alg, "3*p[v1]").unwrap();
        assert!(e.is_zero());
        let f = parse(&alg, "5*p[v1]").unwrap();
        assert_eq!(render(&alg, &f), "2*p[v1]");
    }
}
