//! Recursive-descent parser for the expression grammar (see docs/dsl.md).
//!
//! Precedence: `^` (integer exponent) binds tightest, then `*` `/`, then
//! `+` `-`; binary operators are left-associative. All errors carry the byte
//! offset of the offending token.

use std::fmt;

use num::{BigInt, BigRational, Zero};

use super::{Expr, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at offset {}: {}", self.offset, msg)
            }
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier `{}` at offset {}", name, self.offset)
            }
            ParseErrorKind::ArityMismatch {
                name,
                expected,
                got,
            } => write!(
                f,
                "`{}` takes {} argument(s), got {} (offset {})",
                name, expected, got, self.offset
            ),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos >= self.src.len() {
                break;
            }
            let start = self.pos;
            let c = self.src[self.pos];
            let tok = match c {
                b'+' => {
                    self.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    self.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    self.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    self.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    self.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    self.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    self.pos += 1;
                    Tok::RParen
                }
                b',' => {
                    self.pos += 1;
                    Tok::Comma
                }
                b'0'..=b'9' => self.number(start)?,
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
                }
                other => {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::Syntax(format!(
                            "unexpected character `{}`",
                            other as char
                        )),
                    })
                }
            };
            out.push((tok, start));
        }
        Ok(out)
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = &self.src[start..self.pos];
        let mut value: BigRational = BigRational::from_integer(
            String::from_utf8_lossy(int_part).parse::<BigInt>().unwrap(),
        );
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(ParseError {
                    offset: self.pos.min(self.src.len()),
                    kind: ParseErrorKind::Syntax("expected digits after decimal point".into()),
                });
            }
            let digits = &self.src[frac_start..self.pos];
            let num: BigInt = String::from_utf8_lossy(digits).parse().unwrap();
            let den = BigInt::from(10u32).pow(digits.len() as u32);
            value += BigRational::new(num, den);
        }
        Ok(Tok::Num(value))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::add(&lhs, &rhs);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::sub(&lhs, &rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::mul(&lhs, &rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::div(&lhs, &rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(Expr::neg(&inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let k = self.exponent()?;
            base = base.powi(k);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Num(r)) if r.is_integer() => {
                let k: i32 = r
                    .numer()
                    .try_into()
                    .map_err(|_| self.syntax("exponent out of range"))?;
                Ok(if neg { -k } else { k })
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.syntax("expected integer exponent after `^`"))
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(r)) => Ok(Expr::constant(r, num::Zero::zero())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.ident(name, offset),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.syntax("expected a value"))
            }
        }
    }

    fn ident(&mut self, name: String, offset: usize) -> Result<Expr, ParseError> {
        match name.as_str() {
            "x" => return Ok(Expr::var(Var::X)),
            "y" => return Ok(Expr::var(Var::Y)),
            "i" => return Ok(Expr::i()),
            _ => {}
        }
        let expected = match name.as_str() {
            "exp" | "sqrt" => 1,
            "atan2" | "glue" => 2,
            "bump" => 3,
            _ => {
                return Err(ParseError {
                    offset,
                    kind: ParseErrorKind::UnknownIdentifier(name),
                })
            }
        };
        self.expect(Tok::LParen, "`(` after function name")?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        if args.len() != expected {
            return Err(ParseError {
                offset,
                kind: ParseErrorKind::ArityMismatch {
                    name,
                    expected,
                    got: args.len(),
                },
            });
        }
        Ok(match name.as_str() {
            "exp" => args[0].exp(),
            "sqrt" => args[0].sqrt(),
            "atan2" => Expr::atan2(&args[0], &args[1]),
            "glue" => {
                let order = args[0]
                    .as_const()
                    .filter(|c| c.im.is_zero() && c.re.is_integer() && c.re >= num::Zero::zero())
                    .and_then(|c| u32::try_from(c.re.numer().clone()).ok())
                    .ok_or(ParseError {
                        offset,
                        kind: ParseErrorKind::Syntax(
                            "glue order must be a nonnegative integer constant".into(),
                        ),
                    })?;
                Expr::glue(order, &args[1])
            }
            "bump" => Expr::bump(&args[0], &args[1], &args[2]),
            _ => unreachable!(),
        })
    }
}

impl Expr {
    /// Parse UTF-8 source in the documented grammar into an expression.
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let toks = Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
        .tokens()?;
        let mut p = Parser {
            toks,
            pos: 0,
            len: src.len(),
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        Ok(e)
    }
}
