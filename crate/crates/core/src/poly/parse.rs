//! Text syntax for polynomials: `+`, `-`, `*` or juxtaposition, `^`,
//! parentheses, integer coefficients, the generator `a` of GF(4), and
//! variables `x1 .. xn`.

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::ff::Field;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Gen,
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, col)),
            '-' => out.push((Tok::Minus, col)),
            '*' | '·' => out.push((Tok::Star, col)),
            '^' => out.push((Tok::Caret, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            'a' => out.push((Tok::Gen, col)),
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::parse(1, col, "expected a variable index after `x`"));
                }
                let idx: usize = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::parse(1, col, "variable index too large"))?;
                if idx == 0 {
                    return Err(Error::parse(1, col, "variables are numbered from x1"));
                }
                out.push((Tok::Var(idx - 1), col));
                i = j;
                continue;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let v: u64 = chars[i..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::parse(1, col, "integer literal too large"))?;
                out.push((Tok::Num(v), col));
                i = j;
                continue;
            }
            other => return Err(Error::parse(1, col, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end_col: usize,
    field: Field,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.field, self.nvars);
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::Num(_) | Tok::Gen | Tok::Var(_) | Tok::LParen) => {}
                _ => return Ok(acc),
            }
            acc = acc.mul(&self.power()?);
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(&Tok::Num(e)) => {
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::parse(1, self.col(), "expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let col = self.col();
        let k = self.field;
        let n = self.nvars;
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(v)) => Ok(Polynomial::constant(k, n, k.from_int((v % k.characteristic() as u64) as i64))),
            Some(Tok::Gen) => match k.generator() {
                Some(a) => Ok(Polynomial::constant(k, n, a)),
                None => Err(Error::parse(1, col, format!("`a` is not an element of {k}"))),
            },
            Some(Tok::Var(i)) => {
                if i >= n {
                    Err(Error::parse(
                        1,
                        col,
                        format!("variable x{} out of range (system has {n} variables)", i + 1),
                    ))
                } else {
                    Ok(Polynomial::term(k, Monomial::var(n, i), k.one()))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::parse(1, self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(Error::parse(1, col, "expected a coefficient, variable or `(`"))
            }
        }
    }
}

/// Parse a polynomial in `nvars` variables over `field`. Errors report
/// 1-based columns on line 1.
pub fn parse_polynomial(s: &str, field: Field, nvars: usize) -> Result<Polynomial> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end_col: s.chars().count() + 1,
        field,
        nvars,
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::parse(1, p.col(), "unexpected trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_system() {
        let f3 = Field::prime(3).unwrap();
        let f1 = parse_polynomial("1-x1x2", f3, 2).unwrap();
        assert_eq!(f1.to_string(), "2*x1*x2 + 1");
        let f2 = parse_polynomial("1 + 2 x2", f3, 2).unwrap();
        assert_eq!(f2.to_string(), "2*x2 + 1");
    }

    #[test]
    fn parentheses_powers_and_generator() {
        let f2 = Field::prime(2).unwrap();
        let p = parse_polynomial("x1*(x2+1)*x3", f2, 3).unwrap();
        assert_eq!(p.to_string(), "x1*x2*x3 + x1*x3");
        let k = Field::gf4();
        let p = parse_polynomial("(x1 + a)^2", k, 1).unwrap();
        assert_eq!(p.to_string(), "x1^2 + a^2");
        let p = parse_polynomial("a^2 a", k, 1).unwrap();
        assert_eq!(p.as_constant(), Some(k.one()));
    }

    #[test]
    fn errors_carry_columns() {
        let f2 = Field::prime(2).unwrap();
        match parse_polynomial("x1 + x3", f2, 2) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        match parse_polynomial("x1 + ", f2, 2) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial("a*x1", f2, 1).is_err());
        assert!(parse_polynomial("x1 ? x2", f2, 2).is_err());
        assert!(parse_polynomial("(x1", f2, 1).is_err());
        assert!(parse_polynomial("x0", f2, 1).is_err());
    }
}
