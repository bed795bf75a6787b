//! Text syntax for forms.
//!
//! ```text
//! form     := sign? term (('+' | '-') term)*
//! term     := rational? (var ('^' uint)?)*
//! var      := 'x' uint
//! rational := uint ('/' uint)?
//! ```
//!
//! Whitespace is ignored between tokens. Variables are numbered from 1.
//! The grammar has no parentheses; the printer in [`crate::form`] emits
//! exactly this syntax, so `parse(f.to_string())` gives `f` back.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::{Form, MultiIndex, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Slash,
    Caret,
    X,
    Uint(BigInt),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'x' => Token::X,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((start, Token::Uint(n)));
                continue;
            }
            _ => {
                let c = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character {c:?}"),
                });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    end: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn uint(&mut self, what: &str) -> Result<BigInt> {
        match self.peek() {
            Some(Token::Uint(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.syntax(format!("expected {what}")),
        }
    }

    fn small_uint(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        let n = self.uint(what)?;
        u32::try_from(&n).map_err(|_| Error::Syntax {
            position: at,
            message: format!("{what} {n} is too large"),
        })
    }

    fn term(&mut self) -> Result<(MultiIndex, Rational)> {
        let start = self.pos;
        let mut coeff = Rational::one();
        if let Some(Token::Uint(_)) = self.peek() {
            let num = self.uint("coefficient")?;
            let mut den = BigInt::one();
            if self.peek() == Some(&Token::Slash) {
                self.pos += 1;
                let at = self.offset();
                den = self.uint("denominator")?;
                if den.is_zero() {
                    return Err(Error::Syntax {
                        position: at,
                        message: "zero denominator".into(),
                    });
                }
            }
            coeff = Rational::new(num, den);
        }
        let mut exps = vec![0u32; self.nvars];
        while self.peek() == Some(&Token::X) {
            self.pos += 1;
            let at = self.offset();
            let index = self.uint("variable index")?;
            let idx = u64::try_from(&index).unwrap_or(u64::MAX);
            if idx == 0 || idx > self.nvars as u64 {
                return Err(Error::UnknownVariable {
                    index: idx,
                    nvars: self.nvars,
                    position: at,
                });
            }
            let mut e = 1;
            if self.peek() == Some(&Token::Caret) {
                self.pos += 1;
                e = self.small_uint("exponent")?;
            }
            let slot = &mut exps[(idx - 1) as usize];
            *slot = slot.checked_add(e).ok_or(Error::Syntax {
                position: at,
                message: "exponent overflow".into(),
            })?;
        }
        if self.pos == start {
            return self.syntax("expected a coefficient or a variable");
        }
        Ok((MultiIndex::new(exps), coeff))
    }
}

/// Parses `text` as a form in `nvars` variables.
pub fn parse(text: &str, nvars: usize) -> Result<Form> {
    if nvars == 0 {
        return Err(Error::NoVariables);
    }
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        end: text.len(),
        nvars,
    };
    let mut terms = Vec::new();
    let mut negative = false;
    match p.peek() {
        Some(Token::Minus) => {
            negative = true;
            p.pos += 1;
        }
        Some(Token::Plus) => p.pos += 1,
        _ => {}
    }
    loop {
        let (w, c) = p.term()?;
        terms.push((w, if negative { -c } else { c }));
        match p.peek() {
            None => break,
            Some(Token::Plus) => negative = false,
            Some(Token::Minus) => negative = true,
            Some(_) => return p.syntax("expected '+', '-' or end of input"),
        }
        p.pos += 1;
    }
    let degrees: BTreeSet<u32> = terms.iter().map(|(w, _)| w.degree()).collect();
    if degrees.len() > 1 {
        return Err(Error::Inhomogeneous {
            degrees: degrees.into_iter().collect(),
        });
    }
    let degree = degrees.into_iter().next().unwrap_or(0);
    Form::from_terms(nvars, degree, terms)
}
