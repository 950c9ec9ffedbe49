//! Text grammar for polynomials and substitution maps.
//!
//! ```text
//! expression := ['+'|'-'] term (('+'|'-') term)*
//! term       := factor ('*' factor)*
//! factor     := primary ('^' uint)?
//! primary    := number | 'x' | 'y' | '(' expression ')'
//! ```
//!
//! Multiplication is always explicit (`3*x`, never `3x`) and only ASCII is
//! accepted. A map is written `p ; q`.

use thiserror::Error;

use crate::poly::{Poly2, SubstitutionMap};

/// Largest exponent literal, and largest total degree of any intermediate
/// polynomial.
pub const MAX_EXPONENT: u32 = 64;

const MAX_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("unexpected character {0:?}, expected {1}")]
    UnexpectedChar(char, &'static str),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("exponent exceeds {MAX_EXPONENT}")]
    ExponentOverflow,
    #[error("number out of range")]
    NumberOutOfRange,
    #[error("nesting too deep")]
    TooDeep,
    #[error("missing ';' separator")]
    MissingSeparator,
}

/// A parse failure at a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
            depth: 0,
        }
    }

    fn err<T>(&self, offset: usize, kind: ParseErrorKind) -> PResult<T> {
        Err(ParseError { offset, kind })
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

    fn unexpected<T>(&mut self, expected: &'static str) -> PResult<T> {
        match self.peek() {
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd(expected)),
            Some(b) => {
                // Report the full character for non-ASCII input.
                let rest = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or(char::from(b));
                self.err(self.pos, ParseErrorKind::UnexpectedChar(rest, expected))
            }
        }
    }

    fn check_degree(&self, p: &Poly2, offset: usize) -> PResult<()> {
        if p.degree().unwrap_or(0) > MAX_EXPONENT {
            return self.err(offset, ParseErrorKind::ExponentOverflow);
        }
        if p.terms().any(|(_, c)| !c.is_finite()) {
            return self.err(offset, ParseErrorKind::NumberOutOfRange);
        }
        Ok(())
    }

    fn expression(&mut self) -> PResult<Poly2> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err(self.pos, ParseErrorKind::TooDeep);
        }
        let mut sign = 1.0;
        match self.peek() {
            Some(b'-') => {
                sign = -1.0;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let start = self.pos;
        let mut acc = self.term()?.scale(sign);
        loop {
            let sign = match self.peek() {
                Some(b'+') => 1.0,
                Some(b'-') => -1.0,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(&t.scale(sign));
            self.check_degree(&acc, start)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> PResult<Poly2> {
        let start = self.pos;
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let at = self.pos;
            let f = self.factor()?;
            let total = acc.degree().unwrap_or(0) + f.degree().unwrap_or(0);
            if total > MAX_EXPONENT {
                return self.err(at, ParseErrorKind::ExponentOverflow);
            }
            acc = acc.mul(&f);
            self.check_degree(&acc, start)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<Poly2> {
        let base = self.primary()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.unexpected("an exponent");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let exp: u32 = match digits.parse() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return self.err(start, ParseErrorKind::ExponentOverflow),
        };
        if base.degree().unwrap_or(0) * exp > MAX_EXPONENT {
            return self.err(start, ParseErrorKind::ExponentOverflow);
        }
        let p = base.pow(exp);
        self.check_degree(&p, start)?;
        Ok(p)
    }

    fn primary(&mut self) -> PResult<Poly2> {
        let Some(b) = self.peek() else {
            return self.unexpected("a number, variable or '('");
        };
        let start = self.pos;
        match b {
            b'(' => {
                self.pos += 1;
                let inner = self.expression()?;
                if self.peek() != Some(b')') {
                    return self.unexpected("')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            b'0'..=b'9' | b'.' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if text.bytes().filter(|&c| c == b'.').count() > 1 || text == "." {
                    return self.err(start, ParseErrorKind::UnexpectedChar('.', "a number"));
                }
                let v: f64 = text
                    .parse()
                    .map_err(|_| ParseError {
                        offset: start,
                        kind: ParseErrorKind::NumberOutOfRange,
                    })?;
                if !v.is_finite() {
                    return self.err(start, ParseErrorKind::NumberOutOfRange);
                }
                Ok(Poly2::constant(v))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"x" => Ok(Poly2::x()),
                    b"y" => Ok(Poly2::y()),
                    other => self.err(
                        start,
                        ParseErrorKind::UnknownVariable(String::from_utf8_lossy(other).into_owned()),
                    ),
                }
            }
            _ => self.unexpected("a number, variable or '('"),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.unexpected("an operator or end of input"),
        }
    }
}

/// Parses and fully expands a polynomial expression.
pub fn parse_poly(text: &str) -> Result<Poly2, ParseError> {
    let mut p = Parser::new(text);
    let poly = p.expression()?;
    p.finish()?;
    Ok(poly)
}

/// Parses a substitution map `p ; q`.
pub fn parse_map(text: &str) -> Result<SubstitutionMap, ParseError> {
    let Some(split) = text.find(';') else {
        return Err(ParseError {
            offset: text.len(),
            kind: ParseErrorKind::MissingSeparator,
        });
    };
    let p = parse_poly(&text[..split])?;
    let q = parse_poly(&text[split + 1..]).map_err(|e| ParseError {
        offset: e.offset + split + 1,
        kind: e.kind,
    })?;
    Ok(SubstitutionMap::new(p, q))
}
