//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! Juxtaposition is not multiplication: `st` is the identifier `st` and `2s`
//! is a syntax error. The parser only builds a tree; evaluation into a field
//! or polynomial ring happens elsewhere.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub offset: usize,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(u128),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let mut v: u128 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((bytes[i] - b'0') as u128))
                        .ok_or_else(|| ParseError { offset: start, message: "integer literal too large".into() })?;
                    i += 1;
                }
                out.push((start, Tok::Int(v)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(ParseError { offset: start, message: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let offset = self.offset();
            let kind: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Some(Tok::Plus) => ExprKind::Add,
                Some(Tok::Minus) => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr { offset, kind: kind(Box::new(lhs), Box::new(rhs)) };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            let offset = self.offset();
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr { offset, kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            let offset = self.offset();
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr { offset, kind: ExprKind::Neg(Box::new(inner)) });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            let offset = self.offset();
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(k)) => {
                    let k = u32::try_from(*k).or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    return Ok(Expr { offset, kind: ExprKind::Pow(Box::new(base), k) });
                }
                _ => return self.err("expected a non-negative integer exponent after `^`"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr { offset, kind: ExprKind::Int(v) })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr { offset, kind: ExprKind::Var(name) })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => Err(ParseError { offset, message: "unclosed parenthesis".into() }),
                    Some(_) => self.err("expected `)`"),
                }
            }
            Some(_) => self.err("expected a number, variable or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, end: text.len() };
    let e = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return match parser.peek() {
            Some(Tok::RParen) => parser.err("unmatched `)`"),
            _ => parser.err("expected an operator (multiplication must be written with `*`)"),
        };
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(e: &Expr) -> &str {
        match &e.kind {
            ExprKind::Var(v) => v,
            k => panic!("not a variable: {k:?}"),
        }
    }

    #[test]
    fn precedence() {
        // -x^2 parses as -(x^2); a + b*c as a + (b*c)
        let e = parse("-x^2").unwrap();
        match e.kind {
            ExprKind::Neg(inner) => assert!(matches!(inner.kind, ExprKind::Pow(_, 2))),
            k => panic!("{k:?}"),
        }
        let e = parse("a + b*c").unwrap();
        match e.kind {
            ExprKind::Add(a, bc) => {
                assert_eq!(var(&a), "a");
                assert!(matches!(bc.kind, ExprKind::Mul(_, _)));
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn left_associative_subtraction() {
        let e = parse("a - b - c").unwrap();
        match e.kind {
            ExprKind::Sub(ab, c) => {
                assert_eq!(var(&c), "c");
                assert!(matches!(ab.kind, ExprKind::Sub(_, _)));
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn unclosed_parenthesis_points_at_the_paren() {
        let err = parse("y^2 - (x^3").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.message.contains("unclosed"));
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        assert_eq!(parse("2s").unwrap_err().offset, 1);
        assert_eq!(parse("s t").unwrap_err().offset, 2);
        assert!(matches!(parse("st").unwrap().kind, ExprKind::Var(ref v) if v == "st"));
    }

    #[test]
    fn other_errors() {
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("x^").unwrap_err().offset, 2);
        assert_eq!(parse("x^y").unwrap_err().offset, 2);
        assert_eq!(parse("x + $").unwrap_err().offset, 4);
        assert_eq!(parse("x)").unwrap_err().offset, 1);
        assert_eq!(parse("x + * y").unwrap_err().offset, 4);
    }
}
