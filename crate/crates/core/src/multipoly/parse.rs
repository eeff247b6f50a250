//! Recursive-descent parser for the polynomial expression grammar:
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' natural)?
//! base     := rational | generator | variable | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! Whitespace is insignificant and multiplication must be explicit.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{MultiPoly, MonomialOrder, PolyRing};
use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, NumberField, Rational};

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
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            if i < chars.len() && (chars[i] == '.' || chars[i].is_alphabetic() || chars[i] == '_') {
                return Err(Error::Syntax {
                    column: i + 1,
                    message: format!("unexpected `{}` after number (multiplication must be explicit)", chars[i]),
                });
            }
            out.push((Tok::Int(digits.parse().unwrap()), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
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
            other => {
                return Err(Error::Syntax {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.column();
        match self.bump() {
            Tok::Int(n) => {
                if *self.peek() == Tok::Slash {
                    return self.error("exponent must be a non-negative integer");
                }
                let e = n.to_u32().ok_or(Error::Syntax {
                    column: col,
                    message: "exponent too large".into(),
                })?;
                Ok(base.pow(e))
            }
            _ => Err(Error::Syntax {
                column: col,
                message: "exponent must be a non-negative integer".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<MultiPoly> {
        let col = self.column();
        match self.bump() {
            Tok::Int(n) => {
                let mut value = Rational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dcol = self.column();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => value /= Rational::from_integer(d),
                        _ => {
                            return Err(Error::Syntax {
                                column: dcol,
                                message: "expected a positive integer denominator".into(),
                            })
                        }
                    }
                }
                Ok(MultiPoly::constant(self.ring, self.ring.field().from_rational(value)))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.ring.var_index(&name) {
                    Ok(MultiPoly::var(self.ring, i))
                } else if !self.ring.field().generator_name().is_empty()
                    && name == self.ring.field().generator_name()
                {
                    Ok(MultiPoly::constant(self.ring, self.ring.field().alpha()))
                } else {
                    Err(Error::UnknownVariable { name, column: col })
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(Error::Syntax {
                column: col,
                message: "unexpected end of expression".into(),
            }),
            other => Err(Error::Syntax {
                column: col,
                message: format!("unexpected {}", describe(&other)),
            }),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Caret => "`^`",
        Tok::Slash => "`/` (division is only allowed inside rational literals)",
        Tok::RParen => "`)`",
        Tok::LParen => "`(`",
        Tok::Int(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::End => "end of expression",
    }
}

/// Parses an expression in the variables of `ring`; the field generator
/// name denotes α.
pub fn parse_poly(text: &str, ring: &Arc<PolyRing>) -> Result<MultiPoly> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
            p.error("expected an operator (multiplication must be explicit)")
        }
        other => {
            let d = describe(&other.clone());
            p.error(format!("unexpected {d}"))
        }
    }
}

/// Parses a constant expression in α.
pub fn parse_element(text: &str, field: &Arc<NumberField>) -> Result<FieldElement> {
    let ring = PolyRing::new(field.clone(), Vec::new(), MonomialOrder::GrevLex);
    let p = parse_poly(text, &ring)?;
    Ok(p.as_constant().expect("zero-variable polynomial is constant"))
}

/// Parses a univariate polynomial over Q in `var`, coefficients low degree
/// first.
pub fn parse_univariate(text: &str, var: &str) -> Result<Vec<Rational>> {
    let ring = PolyRing::new(NumberField::rationals(), vec![var.to_string()], MonomialOrder::GrevLex);
    let p = parse_poly(text, &ring)?;
    let deg = p.total_degree() as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exps()[0] as usize] = c.rational_part().clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::tests::gaussian_ring;

    #[test]
    fn paper_generator() {
        let (_, r) = gaussian_ring(&["x1", "x2"]);
        let p = parse_poly("1 + x1^2 + x2^2", &r).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn zero_and_simplification() {
        let (_, r) = gaussian_ring(&["x1"]);
        assert!(parse_poly("0", &r).unwrap().is_zero());
        assert_eq!(parse_poly("(1+i)*x1 - i*x1", &r).unwrap(), MultiPoly::var(&r, 0));
        assert_eq!(
            parse_poly("-3/6*x1", &r).unwrap(),
            MultiPoly::var(&r, 0).scale_rational(&Rational::new((-1).into(), 2.into()))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let (_, r) = gaussian_ring(&["x1", "x2"]);
        assert_eq!(
            parse_poly("x1 + y", &r).unwrap_err(),
            Error::UnknownVariable { name: "y".into(), column: 6 }
        );
        assert!(matches!(parse_poly("2x1", &r), Err(Error::Syntax { column: 2, .. })));
        assert!(matches!(parse_poly("x1 x2", &r), Err(Error::Syntax { column: 4, .. })));
        assert!(matches!(parse_poly("x1^x2", &r), Err(Error::Syntax { column: 4, .. })));
        assert!(matches!(parse_poly("x1^1/2", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("(x1 + 1", &r), Err(Error::Syntax { column: 8, .. })));
        assert!(matches!(parse_poly("x1 / x2", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn univariate_minpoly() {
        let c = parse_univariate("t^3 + t^2 - 2*t - 1", "t").unwrap();
        let ints: Vec<i64> = c.iter().map(|q| q.to_integer().try_into().unwrap()).collect();
        assert_eq!(ints, vec![-1, -2, 1, 1]);
    }
}
