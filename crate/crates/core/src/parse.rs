//! Text grammar for polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := int | var | '(' expr ')'
//! var    := 'x' uint | 'x' | 'y' | 'z'
//! ```
//!
//! `x`, `y`, `z` alias `x1`, `x2`, `x3`. The result is fully expanded into
//! canonical sparse form.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize), // 0-based variable index
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let start = self.pos;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((start, Tok::Plus));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((start, Tok::Minus));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((start, Tok::Star));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((start, Tok::Caret));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((start, Tok::LParen));
                    self.pos += 1;
                }
                b')' => {
                    out.push((start, Tok::RParen));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let mut end = self.pos;
                    while end < self.src.len() && self.src[end].is_ascii_digit() {
                        end += 1;
                    }
                    let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                    let value: BigInt = text.parse().unwrap();
                    out.push((start, Tok::Int(value)));
                    self.pos = end;
                }
                b'x' => {
                    let mut end = self.pos + 1;
                    while end < self.src.len() && self.src[end].is_ascii_digit() {
                        end += 1;
                    }
                    if end == self.pos + 1 {
                        out.push((start, Tok::Var(0)));
                    } else {
                        let text = std::str::from_utf8(&self.src[self.pos + 1..end]).unwrap();
                        let idx: usize = text
                            .parse()
                            .map_err(|_| self.err(start, "variable index out of range"))?;
                        if idx == 0 {
                            return Err(self.err(start, "variable indices start at 1"));
                        }
                        out.push((start, Tok::Var(idx - 1)));
                    }
                    self.pos = end;
                }
                b'y' => {
                    out.push((start, Tok::Var(1)));
                    self.pos += 1;
                }
                b'z' => {
                    out.push((start, Tok::Var(2)));
                    self.pos += 1;
                }
                other => {
                    return Err(self.err(start, format!("unexpected character '{}'", other as char)))
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    end_pos: usize,
    max_var: Option<usize>,
}

#[derive(Debug, Clone)]
enum Ast {
    Int(BigInt),
    Var(usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end_pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cursor).map(|(_, t)| t.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut negate_first = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate_first = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = Ast::Neg(Box::new(acc));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Ast::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Ast::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ast> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let rhs = self.factor()?;
            acc = Ast::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(v)) => {
                    let e: u32 = v
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    Ok(Ast::Pow(Box::new(base), e))
                }
                _ => {
                    self.cursor = self.cursor.saturating_sub(1);
                    Err(self.err("exponent must be a non-negative integer literal"))
                }
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Ast> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(Ast::Int(v)),
            Some(Tok::Var(i)) => {
                self.max_var = Some(self.max_var.map_or(i, |m| m.max(i)));
                Ok(Ast::Var(i))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.cursor = self.cursor.saturating_sub(1);
                        Err(self.err("expected ')'"))
                    }
                }
            }
            _ => {
                self.cursor = self.cursor.saturating_sub(1);
                Err(self.err("expected integer, variable, or '('"))
            }
        }
    }
}

fn build(ast: &Ast, num_vars: usize) -> IntPolynomial {
    match ast {
        Ast::Int(v) => IntPolynomial::constant(num_vars, v.clone()),
        Ast::Var(i) => IntPolynomial::variable(num_vars, *i),
        Ast::Neg(a) => build(a, num_vars).neg(),
        Ast::Add(a, b) => build(a, num_vars).add(&build(b, num_vars)),
        Ast::Sub(a, b) => build(a, num_vars).sub(&build(b, num_vars)),
        Ast::Mul(a, b) => build(a, num_vars).mul(&build(b, num_vars)),
        Ast::Pow(a, e) => build(a, num_vars).pow(*e),
    }
}

/// Parses `text` into fully expanded canonical sparse form. The ambient
/// variable count is the largest variable index seen, or `num_vars_hint`
/// when that is larger; the zero polynomial is permitted.
pub fn parse_polynomial(text: &str, num_vars_hint: Option<usize>) -> Result<IntPolynomial> {
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser {
        toks,
        cursor: 0,
        end_pos: text.len(),
        max_var: None,
    };
    let ast = parser.expr()?;
    if parser.cursor != parser.toks.len() {
        return Err(parser.err("trailing input after expression"));
    }
    let needed = parser.max_var.map_or(0, |m| m + 1);
    let num_vars = match num_vars_hint {
        Some(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter(
                    "num_vars hint must be at least 1".into(),
                ));
            }
            if needed > n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: needed,
                });
            }
            n
        }
        None => needed.max(1),
    };
    Ok(build(&ast, num_vars))
}
