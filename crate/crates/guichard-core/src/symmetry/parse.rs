//! Parser for the textual expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := primary ('^' integer)?
//! primary:= number | atom | '(' expr ')'
//! ```
//!
//! Atoms are the declared identifiers (x1, l2, h12, l1_x2, h12_x3, a, c,
//! a1..a3); numbers are integer or decimal literals, read exactly as
//! rationals. Division is expression-level and must resolve to a monomial
//! in l₁, l₂, l₃ (so `3/2` and `h12/l2` parse, `1/(l1+l2)` does not).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow::Pow;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::symmetry::atom::Atom;
use crate::symmetry::expr::Expression;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(Token, usize)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Token::End, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'/' => {
                self.pos += 1;
                Token::Slash
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'0'..=b'9' => {
                let mut intpart = String::new();
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    intpart.push(self.src[self.pos] as char);
                    self.pos += 1;
                }
                let mut frac = String::new();
                if self.pos < self.src.len() && self.src[self.pos] == b'.' {
                    self.pos += 1;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        frac.push(self.src[self.pos] as char);
                        self.pos += 1;
                    }
                }
                let digits: String = alloc::format!("{intpart}{frac}");
                let numer: BigInt = digits.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: "bad number".to_string(),
                })?;
                let denom = BigInt::from(10u32).pow(frac.len() as u32);
                Token::Number(BigRational::new(numer, denom))
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut ident = String::new();
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    ident.push(self.src[self.pos] as char);
                    self.pos += 1;
                }
                Token::Ident(ident)
            }
            other => {
                return Err(Error::Parse {
                    offset: start,
                    message: alloc::format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok((tok, start))
    }
}

pub struct Parser {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    atoms: BTreeMap<String, Atom>,
    end_offset: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let mut lexer = Lexer::new(src);
        let mut tokens = Vec::new();
        loop {
            let (tok, off) = lexer.next()?;
            let is_end = tok == Token::End;
            tokens.push((tok, off));
            if is_end {
                break;
            }
        }
        let atoms = Atom::all().into_iter().map(|a| (a.name(), a)).collect();
        Ok(Parser {
            tokens,
            cursor: 0,
            atoms,
            end_offset: src.len(),
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.cursor].0
    }

    fn offset(&self) -> usize {
        if self.cursor < self.tokens.len() {
            self.tokens[self.cursor].1
        } else {
            self.end_offset
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.cursor].0.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Token::Slash => {
                    self.bump();
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expression> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression> {
        let base = self.primary()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let neg = if *self.peek() == Token::Minus {
                self.bump();
                true
            } else {
                false
            };
            let off = self.offset();
            match self.bump() {
                Token::Number(r) if r.is_integer() => {
                    let e = r.numer().to_u32().ok_or(Error::Parse {
                        offset: off,
                        message: "exponent too large".to_string(),
                    })?;
                    let p = base.pow(e);
                    if neg {
                        return Expression::one().div(&p);
                    }
                    Ok(p)
                }
                _ => Err(Error::Parse {
                    offset: off,
                    message: "expected integer exponent".to_string(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expression> {
        let off = self.offset();
        match self.bump() {
            Token::Number(r) => Ok(Expression::from_rat(r)),
            Token::Ident(name) => match self.atoms.get(&name) {
                Some(a) => Ok(Expression::atom(*a)),
                None => Err(Error::UnknownAtom { name }),
            },
            Token::LParen => {
                let inner = self.expr()?;
                let off = self.offset();
                match self.bump() {
                    Token::RParen => Ok(inner),
                    _ => Err(Error::Parse {
                        offset: off,
                        message: "expected `)`".to_string(),
                    }),
                }
            }
            other => Err(Error::Parse {
                offset: off,
                message: alloc::format!("expected a value, found {other:?}"),
            }),
        }
    }
}

/// Parses a source string into a normalized expression.
pub fn parse(src: &str) -> Result<Expression> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if *p.peek() != Token::End {
        return Err(Error::Parse {
            offset: p.offset(),
            message: "trailing input".to_string(),
        });
    }
    Ok(e)
}
