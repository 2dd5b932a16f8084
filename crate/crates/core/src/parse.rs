//! Polynomial text format.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr     := ["+"|"-"] term (("+"|"-") term)*
//! term     := factor ("*" factor)*
//! factor   := base ("^" nat)?
//! base     := var | rational | "(" expr ")"
//! rational := int ("/" nat)?
//! ```
//!
//! Multiplication is always explicit: `2x` and `x y` are syntax errors, not
//! implicit products. Parse errors carry a byte offset into the input.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, VarSet};
use crate::rational::Rat;

pub fn parse_poly(text: &str, vars: &VarSet) -> Result<MultiPoly> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        vars,
    };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    vars: &'a VarSet,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else {
                // adjacency without an operator is the classic implicit
                // product; reject it loudly rather than guess
                if matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'(' || b == b'_')
                {
                    return Err(self.err("implicit multiplication; write `*`"));
                }
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.base()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let n = self.nat()?;
            let e: u32 = n
                .try_into()
                .map_err(|_| Error::Parse {
                    pos: start,
                    msg: "exponent too large".into(),
                })?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() || b == b'-' => self.rational(),
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let name = self.ident();
                match self.vars.index_of(&name) {
                    Some(i) => Ok(MultiPoly::var(self.vars, i)),
                    None => Err(self.err(format!(
                        "unknown variable `{name}` (ring: {})",
                        self.vars.names().join(",")
                    ))),
                }
            }
            _ => Err(self.err("expected variable, number or `(`")),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn rational(&mut self) -> Result<MultiPoly> {
        let neg = self.eat(b'-');
        let num = self.nat()?;
        let num = if neg { -num } else { num };
        self.skip_ws();
        // only treat `/` as a rational separator when a digit follows;
        // there is no other use of `/` in the grammar, so this is safe
        if self.eat(b'/') {
            self.skip_ws();
            let den = self.nat()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(MultiPoly::constant(self.vars, Rat::new(num, den)))
        } else {
            Ok(MultiPoly::constant(self.vars, Rat::from_integer(num)))
        }
    }

    fn nat(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are utf8");
        Ok(s.parse().expect("digits parse"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::rational::{rat, rat_int};

    fn vs() -> VarSet {
        VarSet::new(["x", "y", "u1"])
    }

    #[test]
    fn parses_catalog_style_templates() {
        let v = vs();
        let p = parse_poly("x^3 + y^10 + u1*x*y^7 - 3/4*y", &v).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![3, 0, 0])), rat_int(1));
        assert_eq!(p.coeff(&Monomial(vec![1, 7, 1])), rat_int(1));
        assert_eq!(p.coeff(&Monomial(vec![0, 1, 0])), rat(-3, 4));
    }

    #[test]
    fn parses_parenthesized_and_signed() {
        let v = vs();
        let p = parse_poly("-(x - y)^2 + (-2)*x", &v).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![2, 0, 0])), rat_int(-1));
        assert_eq!(p.coeff(&Monomial(vec![1, 1, 0])), rat_int(2));
        assert_eq!(p.coeff(&Monomial(vec![1, 0, 0])), rat_int(-2));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let v = vs();
        assert!(matches!(
            parse_poly("2x", &v),
            Err(Error::Parse { .. })
        ));
        assert!(parse_poly("x y", &v).is_err());
        assert!(parse_poly("3(x+y)", &v).is_err());
    }

    #[test]
    fn rejects_unknown_variables_and_garbage() {
        let v = vs();
        assert!(parse_poly("x + z", &v).is_err());
        assert!(parse_poly("x +", &v).is_err());
        assert!(parse_poly("x ^ y", &v).is_err());
        assert!(parse_poly("1/0", &v).is_err());
    }

    #[test]
    fn display_round_trips_through_parser() {
        let v = vs();
        let p = parse_poly("x^3 - 1/2*x*y + 7 - u1^2", &v).unwrap();
        let q = parse_poly(&p.to_string(), &v).unwrap();
        assert_eq!(p, q);
    }
}
