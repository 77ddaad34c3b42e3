//! Parser for Scalar literals.
//!
//! Grammar (conventional precedence, `^` binds tighter than unary minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | ident | jet | '(' expr ')'
//! jet    := ident '\''* ('[' ident (',' ident)* ']')? '(' ident (',' ident)* ')'
//! ```
//!
//! `m'(x6)` is the first derivative of `m` in its single argument; the
//! bracket form `a[z2,x6](x6,z2)` lists the coordinates differentiated by,
//! with repetition.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Var, Q};
use crate::scalar::Scalar;

pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: msg.to_string(),
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

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| Error::Parse {
                    column: at + 1,
                    message: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let at = self.pos;
            let n = self.integer()?;
            let e: i64 = n
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| Error::Parse {
                column: at + 1,
                message: "negative power of zero".into(),
            });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphabetic() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
            while self.pos < self.chars.len()
                && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
            {
                self.pos += 1;
            }
            Ok(self.chars[start..self.pos].iter().collect())
        } else {
            Err(self.err("expected identifier"))
        }
    }

    fn ident_list(&mut self, close: char) -> Result<Vec<String>> {
        let mut out = vec![self.ident()?];
        while self.eat(',') {
            out.push(self.ident()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(Scalar::from_q(Q::from_integer(self.integer()?))),
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.ident()?;
                let mut primes = 0u32;
                while self.pos < self.chars.len() && self.chars[self.pos] == '\'' {
                    primes += 1;
                    self.pos += 1;
                }
                let derivs = if self.pos < self.chars.len() && self.chars[self.pos] == '[' {
                    self.pos += 1;
                    Some(self.ident_list(']')?)
                } else {
                    None
                };
                let is_call = self.pos < self.chars.len() && self.chars[self.pos] == '(';
                if !is_call {
                    if primes > 0 || derivs.is_some() {
                        return Err(self.err("expected `(` after function symbol"));
                    }
                    return Ok(Scalar::coord(&name));
                }
                self.pos += 1;
                let args = self.ident_list(')')?;
                let mut orders = vec![0u32; args.len()];
                if primes > 0 {
                    if args.len() != 1 {
                        return Err(self.err("primes are only allowed for one-argument symbols"));
                    }
                    orders[0] += primes;
                }
                for d in derivs.unwrap_or_default() {
                    match args.iter().position(|a| *a == d) {
                        Some(i) => orders[i] += 1,
                        None => {
                            return Err(self.err(&format!(
                                "derivative coordinate `{d}` is not an argument of `{name}`"
                            )))
                        }
                    }
                }
                Ok(Scalar::var(Var::jet(&name, &args, &orders)))
            }
            Some(c) => Err(self.err(&format!("unexpected character `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(parse_scalar("-x^2").unwrap(), parse_scalar("-(x^2)").unwrap());
        assert_eq!(
            parse_scalar("1 + 2*3").unwrap(),
            parse_scalar("7").unwrap()
        );
        assert_eq!(parse_scalar("2/3*x").unwrap().to_string(), "2/3*x");
    }

    #[test]
    fn jets_and_primes_agree() {
        assert_eq!(
            parse_scalar("m''(x6)").unwrap(),
            parse_scalar("m[x6,x6](x6)").unwrap()
        );
    }

    #[test]
    fn errors_report_columns() {
        match parse_scalar("x1 + * x2") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_scalar("m'").is_err());
        assert!(parse_scalar("(x1").is_err());
        assert!(parse_scalar("x1/0").is_err());
    }

    #[test]
    fn negative_exponent() {
        assert_eq!(
            parse_scalar("x1^-2").unwrap(),
            parse_scalar("1/x1^2").unwrap()
        );
    }
}
