//! Text syntax for polynomials: `x[i,a]` atoms (0-based), `*` products,
//! `+`/`-`, integer or rational literals such as `3/2`, and parentheses.
//!
//! The printer in `poly.rs` emits a subset of this grammar, so
//! `parse_poly(&p.to_string()) == p` for every polynomial.

use num_bigint::BigInt;
use num_traits::One;

use super::poly::NCPolynomial;
use super::Coeff;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

pub fn parse_poly(text: &str) -> Result<NCPolynomial> {
    parse_poly_at_line(text, 1)
}

pub(crate) fn parse_poly_at_line(text: &str, line: usize) -> Result<NCPolynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, line };
    let out = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing characters"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.line, format!("{msg} (column {})", self.pos + 1))
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn sum(&mut self) -> Result<NCPolynomial> {
        let mut acc = NCPolynomial::zero();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.product()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<NCPolynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.multiply(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPolynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.unsigned()?;
                self.expect(b',')?;
                let a = self.unsigned()?;
                self.expect(b']')?;
                let i = usize::try_from(i).map_err(|_| self.err("index too large"))?;
                let a = usize::try_from(a).map_err(|_| self.err("index too large"))?;
                if i > u16::MAX as usize || a > u16::MAX as usize {
                    return Err(self.err("generator index too large"));
                }
                Ok(NCPolynomial::generator(i, a))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.unsigned()?;
                let mut c = Coeff::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.unsigned()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    c /= Coeff::from_integer(den);
                }
                Ok(NCPolynomial::constant(c))
            }
            Some(b'-') => {
                // unary minus inside a product, e.g. `2*-x[0,0]`
                self.pos += 1;
                let f = self.factor()?;
                Ok(f.scale(&-Coeff::one()))
            }
            _ => Err(self.err("expected factor")),
        }
    }

    fn unsigned(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }
}
