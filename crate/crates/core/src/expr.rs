//! Parser for the textual coefficient and polynomial encoding.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)?
//! atom    := integer | 'z' | 't' | '(' sum ')'
//! ```
//!
//! `z` is the chosen root of unity of the ambient field and `t` the Laurent variable.
//! Division and negative powers are only allowed for units (nonzero monomials).

use thiserror::Error;

use crate::coeff::{CycloField, CycloNumber};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ExprError {
    pub message: String,
    /// Byte offset into the parsed text.
    pub offset: usize,
}

/// Parses a Laurent polynomial in `t` with coefficients in `field`.
pub fn parse_laurent(field: &CycloField, text: &str) -> Result<LaurentPoly, ExprError> {
    Parser { field, src: text.as_bytes(), pos: 0, allow_t: true }.parse_all()
}

/// Parses a coefficient such as `"1/2 + 3*z^2"`.
pub fn parse_coefficient(field: &CycloField, text: &str) -> Result<CycloNumber, ExprError> {
    let p = Parser { field, src: text.as_bytes(), pos: 0, allow_t: false }.parse_all()?;
    Ok(p.coeff(0))
}

struct Parser<'a> {
    field: &'a CycloField,
    src: &'a [u8],
    pos: usize,
    allow_t: bool,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { message: message.into(), offset: self.pos })
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

    fn parse_all(mut self) -> Result<LaurentPoly, ExprError> {
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let v = self.sum()?;
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected character '{}'", c as char));
        }
        Ok(v)
    }

    fn sum(&mut self) -> Result<LaurentPoly, ExprError> {
        let mut acc = self.product()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<LaurentPoly, ExprError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            if op == b'*' {
                acc = &acc * &rhs;
            } else {
                match rhs.unit_inverse() {
                    Some(inv) => acc = &acc * &inv,
                    None => return Err(ExprError { message: "division by a non-unit".into(), offset: at }),
                }
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LaurentPoly, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentPoly, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let exp = self.integer()?;
        let exp: u32 = exp.parse().map_err(|_| ExprError { message: "exponent too large".into(), offset: at })?;
        let base = if negative {
            base.unit_inverse().ok_or(ExprError { message: "negative power of a non-unit".into(), offset: at })?
        } else {
            base
        };
        Ok(base.pow(exp))
    }

    fn integer(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<LaurentPoly, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(LaurentPoly::constant(self.field.zeta()))
            }
            Some(b't') if self.allow_t => {
                self.pos += 1;
                Ok(LaurentPoly::t_pow(self.field, 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let n: num_bigint::BigInt = digits.parse().expect("digits");
                Ok(LaurentPoly::constant(self.field.from_rational(crate::coeff::Rational::from_integer(n))))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}
