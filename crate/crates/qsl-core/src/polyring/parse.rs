//! Recursive-descent reader for polynomial expressions.
//!
//! expression := ['+'|'-'] term (('+'|'-') term)*
//! term       := factor ('*' factor)*
//! factor     := atom ('^' posint)*
//! atom       := integer ['/' integer] | identifier | '(' expression ')'

use num_bigint::BigInt;
use num_traits::Zero;

use super::mpoly::{MPoly, Vars};
use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{msg} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn expression(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = MPoly::zero(self.vars);
        let mut first = true;
        loop {
            let neg = if self.eat(b'-') {
                true
            } else if self.eat(b'+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            let t = self.term()?;
            acc = if neg { acc - t } else { acc + t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc * f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, ParseError> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let e = self.integer()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= 64 => e,
                _ => return self.err("exponent out of range"),
            };
            base = base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expression()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.eat(b'/') {
                    let d = self.integer()?;
                    if d.is_zero() {
                        return self.err("zero denominator");
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(MPoly::constant(self.vars, Rational::new(n, d)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(MPoly::var_at(self.vars, i)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable '{name}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial over `vars`. Juxtaposition is not multiplication.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expression()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::mpoly::vars;
    use crate::polyring::rational::rq;

    #[test]
    fn reads_expressions() {
        let v = vars(&["g", "x", "y"]);
        let p = parse_poly("(x+1)*(g*x+1) - 3/2*y^2", &v).unwrap();
        assert_eq!(p.to_string(), "g*x^2 + g*x - 3/2*y^2 + x + 1");
        let q = parse_poly(" -x^2 ", &v).unwrap();
        assert_eq!(q.coeff(&[0, 2, 0]), rq(-1, 1));
        assert_eq!(parse_poly("(x^2)^2", &v).unwrap().total_degree(), 4);
    }

    #[test]
    fn reports_positions() {
        let v = vars(&["x", "y"]);
        assert_eq!(parse_poly("x + z", &v).unwrap_err().pos, 4);
        assert_eq!(parse_poly("2x", &v).unwrap_err().pos, 1);
        assert_eq!(parse_poly("(x+1", &v).unwrap_err().pos, 4);
        assert_eq!(parse_poly("1/0", &v).unwrap_err().msg, "zero denominator");
        assert!(parse_poly("", &v).is_err());
    }
}
