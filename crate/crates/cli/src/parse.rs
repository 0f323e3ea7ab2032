//! Expression syntax for differential polynomials.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := INT ['/' INT] | NAME ['^(' INT ')'] | '(' expr ')' | 'd' ['^' INT] '(' expr ')'
//! ```
//!
//! A bare `x` is `x^(0)`; `x^(k)` is the `k`-th derivative variable, while
//! `x^k` and `(...)^k` are powers. `d^n(...)` differentiates at parse time.
//! The printer in the core library writes exactly this syntax, so printed
//! polynomials parse back to themselves.

use std::sync::Arc;

use diffgsb::diffpoly::{DiffPoly, Ring, Scalar};
use diffgsb::Error;
use num_bigint::BigInt;

/// The reserved name of the derivation operator.
pub const DERIVATION: &str = "d";

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_poly(ring: &Arc<Ring>, src: &str) -> Result<DiffPoly, Error> {
    let mut p = Parser { ring, src: src.as_bytes(), pos: 0 };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
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

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn digits(&mut self) -> Result<&str, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small_int(&mut self) -> Result<u32, Error> {
        let start = self.pos;
        let s = self.digits()?;
        s.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "exponent too large".into(),
        })
    }

    fn expr(&mut self) -> Result<DiffPoly, Error> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly, Error> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<DiffPoly, Error> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            base = base.pow(self.small_int()?);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffPoly, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.expr()?;
                self.expect(b')')?;
                Ok(f)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits()?.parse().expect("digits");
                let den: BigInt = if self.eat(b'/') {
                    let at = self.pos;
                    let d: BigInt = self.digits()?.parse().expect("digits");
                    if d == BigInt::from(0) {
                        return Err(Error::Parse {
                            pos: at,
                            msg: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(DiffPoly::constant(self.ring, Scalar::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name == DERIVATION {
                    return self.derivation();
                }
                let gen = self.ring.table().rank(name).ok_or(Error::Parse {
                    pos: start,
                    msg: format!("unknown generator `{name}`"),
                })?;
                // `x^(k)` is a derivative order; `x^k` is left to `unary`
                let order = if self.src[self.pos..].starts_with(b"^(") {
                    self.pos += 2;
                    let k = self.small_int()?;
                    self.expect(b')')?;
                    k
                } else {
                    0
                };
                Ok(DiffPoly::var(
                    self.ring,
                    diffgsb::diffmon::DiffVar::new(gen, order),
                ))
            }
            Some(_) => Err(self.err("expected a number, a generator or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn derivation(&mut self) -> Result<DiffPoly, Error> {
        let n = if self.eat(b'^') { self.small_int()? } else { 1 };
        self.expect(b'(')?;
        let f = self.expr()?;
        self.expect(b')')?;
        Ok(f.derive_n(n))
    }
}
