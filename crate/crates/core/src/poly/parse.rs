//! Recursive-descent parser for polynomial strings.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers match `[a-zA-Z][a-zA-Z0-9_]*` and must name a ring variable.

use num_bigint::BigInt;

use super::{Poly, PolyError};
use crate::linalg::Rational;

pub fn parse_poly(src: &str, names: &[String]) -> Result<Poly, PolyError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        names,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, message: String) -> PolyError {
        PolyError::Parse {
            column: self.pos + 1,
            message,
        }
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

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') | Some('\u{2212}') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some('-') | Some('\u{2212}') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent".into()));
            }
            let e: u32 = digits.parse().map_err(|_| PolyError::Parse {
                column: start + 1,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let v: BigInt = digits.parse().expect("digit string");
                Ok(Poly::constant(self.nvars(), Rational::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let mut ident = String::new();
                while let Some(&c) = self.chars.get(self.pos) {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                match self.names.iter().position(|n| *n == ident) {
                    Some(i) => Ok(Poly::var(self.nvars(), i)),
                    None => Err(PolyError::Parse {
                        column: start + 1,
                        message: format!("unknown variable '{ident}'"),
                    }),
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn precedence() {
        let n = names();
        let a = parse_poly("-x^2 + 2*y*(z - 1)", &n).unwrap();
        let b = parse_poly("2*y*z - 2*y - x*x", &n).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            parse_poly(" ( x + y ) ^ 2 ", &n).unwrap(),
            parse_poly("x^2+2*x*y+y^2", &n).unwrap()
        );
    }

    #[test]
    fn errors_carry_columns() {
        let n = names();
        match parse_poly("x + w", &n) {
            Err(PolyError::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x^", &n), Err(PolyError::Parse { .. })));
        assert!(matches!(
            parse_poly("(x + y", &n),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            parse_poly("x y", &n),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            parse_poly("x^-1", &n),
            Err(PolyError::Parse { .. })
        ));
    }
}
