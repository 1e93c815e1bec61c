//! Expression grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)?
//! atom  := INT | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers are `[a-zA-Z][a-zA-Z0-9_]*`; ASCII whitespace is ignored.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::poly::Ring;
use crate::ratfunc::RatFunc;
use crate::rational::Rational;

const MAX_EXPONENT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("division by zero at byte {pos}")]
    DivisionByZero { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(u8),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((Tok::Int(s.parse().unwrap()), start));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((Tok::Ident(s.to_string()), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Op(c), start));
        }
        Err(ParseError::Syntax {
            pos: start,
            msg: format!("unexpected character `{}`", char::from(c)),
        })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), ParseError> {
        let (t, p) = self.lex.next()?;
        self.tok = t;
        self.pos = p;
        Ok(())
    }

    fn syntax<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        while let Tok::Op(op @ (b'+' | b'-')) = self.tok {
            self.advance()?;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        while let Tok::Op(op @ (b'*' | b'/')) = self.tok {
            let op_pos = self.pos;
            self.advance()?;
            let rhs = self.unary()?;
            if op == b'*' {
                acc = acc.mul(&rhs);
            } else {
                if rhs.is_zero() {
                    return Err(ParseError::DivisionByZero { pos: op_pos });
                }
                acc = acc.div(&rhs);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        if self.tok == Tok::Op(b'-') {
            self.advance()?;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if self.tok != Tok::Op(b'^') {
            return Ok(base);
        }
        self.advance()?;
        let Tok::Int(e) = &self.tok else {
            return self.syntax("exponent must be a nonnegative integer literal");
        };
        let e: u32 = match u32::try_from(e.clone()) {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return self.syntax("exponent too large"),
        };
        self.advance()?;
        if self.tok == Tok::Op(b'^') {
            return self.syntax("chained exponents need parentheses");
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Int(n) => {
                self.advance()?;
                Ok(RatFunc::constant(self.ring, Rational::from_bigint(n)))
            }
            Tok::Ident(name) => {
                let Some(i) = self.ring.index_of(&name) else {
                    return Err(ParseError::UnknownIdentifier { pos: self.pos, name });
                };
                self.advance()?;
                Ok(RatFunc::var(self.ring, i))
            }
            Tok::Op(b'(') => {
                self.advance()?;
                let inner = self.expr()?;
                if self.tok != Tok::Op(b')') {
                    return self.syntax("expected `)`");
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::End => self.syntax("unexpected end of input"),
            Tok::Op(c) => {
                self.tok = Tok::Op(c);
                self.syntax(&format!("unexpected `{}`", char::from(c)))
            }
        }
    }
}

/// Parses an expression over the ring's variables into canonical form.
pub fn parse_expr(text: &str, ring: &Arc<Ring>) -> Result<RatFunc, ParseError> {
    let mut p = Parser {
        lex: Lexer {
            src: text.as_bytes(),
            pos: 0,
        },
        tok: Tok::End,
        pos: 0,
        ring,
    };
    p.advance()?;
    let value = p.expr()?;
    if p.tok != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x", "y"])
    }

    #[test]
    fn trivial_inputs() {
        let r = ring();
        assert!(parse_expr("0", &r).unwrap().is_zero());
        assert!(parse_expr("x^2 - x*x", &r).unwrap().is_zero());
        assert_eq!(parse_expr("-x^2", &r).unwrap().to_string(), "-x^2");
        assert_eq!(parse_expr("2^10", &r).unwrap().to_string(), "1024");
    }

    #[test]
    fn reduced_quotient() {
        let r = ring();
        let f = parse_expr("1/(1+x^2+y^2)", &r).unwrap();
        assert_eq!(f.num().to_string(), "1");
        assert_eq!(f.den().to_string(), "x^2 + y^2 + 1");
        let g = parse_expr("(x^2 - y^2)/(2*x + 2*y)", &r).unwrap();
        assert_eq!(g.to_string(), "1/2*x - 1/2*y");
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring();
        assert_eq!(
            parse_expr("x + z", &r),
            Err(ParseError::UnknownIdentifier {
                pos: 4,
                name: "z".into()
            })
        );
        assert_eq!(parse_expr("x/(y-y)", &r), Err(ParseError::DivisionByZero { pos: 1 }));
        assert!(matches!(parse_expr("x^y", &r), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr("x^2^3", &r), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("(x", &r), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_expr("x $ y", &r),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(parse_expr("1.5", &r), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("", &r), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_expr("x^-1", &r), Err(ParseError::Syntax { .. })));
    }
}
