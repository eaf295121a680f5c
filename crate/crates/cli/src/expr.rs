//! Recursive-descent parser for superpolynomial expressions.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := primary ('^' uint)*
//! primary  := rational | 'i' | 'hbar' | ident | '(' expr ')'
//! rational := int ('/' uint)?
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use bvkit_core::{BigRational, Context, Poly, Scalar};
use serde::Serialize;

/// A malformed input, located by 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A non-fatal diagnostic, such as an odd element squared to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub poly: Poly,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
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

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a Arc<Context>,
    line: usize,
    col0: usize,
    warnings: Vec<Warning>,
}

fn tokenize(src: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(ParseError { line, column: col0 + col, message: format!("unexpected character `{c}`") });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.col0 + self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        (t.0, self.col0 + t.1)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column(), message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = self.peek();
        let hint = match found {
            Tok::Int(_) | Tok::Ident(_) | Tok::LParen => "; juxtaposition is not multiplication, insert `*`",
            _ => "",
        };
        self.error(format!("expected {wanted}, found {}{hint}", found.describe()))
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut negate = false;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            let (_, caret) = self.bump();
            let exponent = match self.peek().clone() {
                Tok::Int(digits) => {
                    let n: u32 = digits.parse().map_err(|_| self.error(format!("exponent `{digits}` is too large")))?;
                    self.bump();
                    n
                }
                _ => return Err(self.unexpected("an unsigned integer exponent")),
            };
            if exponent >= 2 && !base.is_zero() && base.is_odd() {
                self.warnings.push(Warning {
                    line: self.line,
                    column: caret,
                    message: format!("odd element raised to power {exponent} is zero"),
                });
            }
            base = base.pow(exponent);
        }
        Ok(base)
    }

    fn uint(&mut self, wanted: &str) -> Result<BigRational, ParseError> {
        match self.peek().clone() {
            Tok::Int(digits) => {
                self.bump();
                Ok(BigRational::from_str(&digits).expect("digit string"))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn primary(&mut self) -> Result<Poly, ParseError> {
        let ctx = self.ctx;
        match self.peek().clone() {
            Tok::Int(_) => {
                let mut value = self.uint("a number")?;
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let col = self.column();
                    let den = self.uint("a denominator")?;
                    if den == BigRational::from_integer(0.into()) {
                        return Err(ParseError { line: self.line, column: col, message: "division by zero".into() });
                    }
                    value /= den;
                }
                Ok(Poly::constant(ctx, Scalar::from_rational(value)))
            }
            Tok::Ident(name) => {
                let col = self.column();
                self.bump();
                match name.as_str() {
                    "i" => Ok(Poly::constant(ctx, Scalar::i())),
                    "hbar" => Ok(Poly::constant(ctx, Scalar::hbar())),
                    _ => Poly::var(ctx, &name).map_err(|_| ParseError {
                        line: self.line,
                        column: col,
                        message: format!("unknown identifier `{name}`"),
                    }),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, `i`, `hbar`, a generator or `(`")),
        }
    }
}

/// Parses `src` as found at `line`, with its first character in column `col0 + 1`.
pub fn parse_located(src: &str, ctx: &Arc<Context>, line: usize, col0: usize) -> Result<Parsed, ParseError> {
    let toks = tokenize(src, line, col0)?;
    let mut p = Parser { toks, pos: 0, ctx, line, col0, warnings: Vec::new() };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("`+`, `-`, `*` or end of input"));
    }
    Ok(Parsed { poly, warnings: p.warnings })
}

/// Parses a single-line expression in the given context.
pub fn parse_expression(src: &str, ctx: &Arc<Context>) -> Result<Parsed, ParseError> {
    parse_located(src, ctx, 1, 0)
}
