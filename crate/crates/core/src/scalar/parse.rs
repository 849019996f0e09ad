//! Recursive-descent parser for coefficient expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! exponent := '-'? integer | '(' '-'? integer ')'
//! atom   := integer | symbol | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::{Rational, Scalar, Symbols};
use crate::error::{Error, Result};

/// Parses `text` with `t` and the parameters of `symbols` in scope.
pub fn parse_scalar(text: &str, symbols: &Symbols) -> Result<Scalar> {
    let mut p = Parser { src: text, pos: 0, symbols };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    symbols: &'a Symbols,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.pos;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| Error::Syntax {
                    pos: at,
                    msg: "division by the zero polynomial".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let Some(digits) = self.integer() else {
            return Err(self.error("expected integer exponent"));
        };
        if paren && !self.eat(')') {
            return Err(self.error("expected `)` after exponent"));
        }
        let e: i64 = digits.parse().map_err(|_| self.error("exponent out of range"))?;
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| self.error("negative power of zero"))
    }

    fn integer(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer().expect("digit present");
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(Scalar::from_rational(Rational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek_raw().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += self.peek_raw().map_or(0, char::len_utf8);
                }
                let name = &self.src[start..self.pos];
                match self.symbols.index(name) {
                    Some(i) => Ok(Scalar::var(i)),
                    None => Err(Error::UndeclaredSymbol(name.to_string())),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms() -> Symbols {
        Symbols::new(&["lam"]).unwrap()
    }

    #[test]
    fn precedence() {
        let s = syms();
        assert_eq!(parse_scalar("-t^2", &s).unwrap(), -Scalar::t().pow(2).unwrap());
        assert_eq!(parse_scalar("1/4*t", &s).unwrap(), &Scalar::from_ratio(1, 4) * &Scalar::t());
        assert_eq!(parse_scalar("2^3", &s).unwrap(), Scalar::from_int(8));
        assert_eq!(parse_scalar("t^(-2)", &s).unwrap(), Scalar::t_pow(-2));
        assert_eq!(parse_scalar("t^-1", &s).unwrap(), Scalar::t_pow(-1));
    }

    #[test]
    fn errors() {
        let s = syms();
        assert!(matches!(parse_scalar("t +", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_scalar("(t", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_scalar("mu*t", &s), Err(Error::UndeclaredSymbol(n)) if n == "mu"));
        assert!(matches!(parse_scalar("1/(t-t)", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_scalar("t t", &s), Err(Error::Syntax { .. })));
    }

    #[test]
    fn print_parse_is_idempotent() {
        let s = syms();
        for text in [
            "(1/4)*((t^2-1)/t)",
            "lam*t - t - lam + 1/t",
            "1 - lam + lam/t - 1/t^2",
            "(1/2)*t^2 - lam*t^2 + lam*t - 1/2",
            "-3/(lam*t - 1)",
            "t^2*(1-t^2)",
            "-1/(t*lam)",
        ] {
            let a = parse_scalar(text, &s).unwrap();
            let printed = a.format(&s);
            let b = parse_scalar(&printed, &s).unwrap();
            assert_eq!(a, b, "{text} -> {printed}");
            assert_eq!(printed, b.format(&s));
        }
    }
}
