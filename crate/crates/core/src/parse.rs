//! Reading and writing Seifert matrices as text.
//!
//! Accepted forms: brace `{{-1,1},{0,2}}`, JSON `[[-1,1],[0,2]]`, or a
//! whitespace grid with one row per line. `{}` and `[]` are the unknot.

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::seifert::{SeifertError, SeifertMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has odd size {0}")]
    OddDimension(usize),
    #[error("skew part is not unimodular: det(V - V^T) = {0}, expected 1")]
    NotUnimodular(BigInt),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        syntax_at(self.text, self.pos, message)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.bump();
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits {
            self.pos = start;
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected an integer, found '{c}'")),
                None => self.error("expected an integer, found end of input"),
            });
        }
        Ok(self.text[start..self.pos].parse().expect("sign and ASCII digits"))
    }
}

fn syntax_at(text: &str, pos: usize, message: impl Into<String>) -> ParseError {
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn closer(open: char) -> char {
    if open == '{' {
        '}'
    } else {
        ']'
    }
}

fn bracketed(text: &str) -> Result<Vec<Vec<BigInt>>, ParseError> {
    let mut cur = Cursor { text, pos: 0 };
    cur.skip_ws();
    let open = cur.bump().expect("caller checked the first character");
    let close = closer(open);
    let mut rows = Vec::new();
    cur.skip_ws();
    if cur.peek() == Some(close) {
        cur.bump();
    } else {
        loop {
            cur.expect(open)?;
            let mut row = Vec::new();
            cur.skip_ws();
            if cur.peek() == Some(close) {
                cur.bump();
            } else {
                loop {
                    row.push(cur.integer()?);
                    cur.skip_ws();
                    match cur.bump() {
                        Some(',') => continue,
                        Some(c) if c == close => break,
                        Some(c) => {
                            cur.pos -= c.len_utf8();
                            return Err(cur.error(format!("expected ',' or '{close}', found '{c}'")));
                        }
                        None => return Err(cur.error(format!("expected ',' or '{close}', found end of input"))),
                    }
                }
            }
            rows.push(row);
            cur.skip_ws();
            match cur.bump() {
                Some(',') => continue,
                Some(c) if c == close => break,
                Some(c) => {
                    cur.pos -= c.len_utf8();
                    return Err(cur.error(format!("expected ',' or '{close}', found '{c}'")));
                }
                None => return Err(cur.error(format!("expected ',' or '{close}', found end of input"))),
            }
        }
    }
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("unexpected '{c}' after the matrix")));
    }
    Ok(rows)
}

fn grid(text: &str) -> Result<Vec<Vec<BigInt>>, ParseError> {
    let mut rows = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let mut row = Vec::new();
        let mut cur = Cursor { text, pos: offset };
        let end = offset + line.len();
        loop {
            while cur.pos < end && cur.peek().is_some_and(char::is_whitespace) {
                cur.bump();
            }
            if cur.pos >= end {
                break;
            }
            row.push(cur.integer()?);
            if cur.pos < end && !cur.peek().is_some_and(char::is_whitespace) {
                let c = cur.peek().expect("inside the line");
                return Err(cur.error(format!("unexpected '{c}' in grid row")));
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
        offset = end;
    }
    if rows.is_empty() {
        return Err(syntax_at(text, text.len(), "empty input"));
    }
    Ok(rows)
}

/// Parses an integer matrix in any accepted form, without Seifert validation.
pub fn parse_int_matrix(text: &str) -> Result<IntMatrix, ParseError> {
    let first = text.trim_start().chars().next();
    let rows = match first {
        Some('{' | '[') => bracketed(text)?,
        _ => grid(text)?,
    };
    let cols = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(ParseError::Ragged {
            row: i + 1,
            expected: cols,
            got: r.len(),
        });
    }
    let n = rows.len();
    Ok(IntMatrix::new(n, cols, rows.into_iter().flatten().collect()).expect("rows of equal length"))
}

/// Parses and validates a Seifert matrix.
pub fn parse_matrix(text: &str) -> Result<SeifertMatrix, ParseError> {
    let m = parse_int_matrix(text)?;
    SeifertMatrix::new(m).map_err(|e| match e {
        SeifertError::NotSquare { rows, cols } => ParseError::NotSquare { rows, cols },
        SeifertError::OddDimension(n) => ParseError::OddDimension(n),
        SeifertError::SkewNotUnimodular(d) => ParseError::NotUnimodular(d),
        other => unreachable!("construction only fails on shape or skew determinant: {other}"),
    })
}

/// Parses an integer vector written `{a,b,…}`, `[a,b,…]`, or whitespace-separated.
pub fn parse_vector(text: &str) -> Result<Vec<BigInt>, ParseError> {
    let t = text.trim();
    match t.chars().next() {
        Some(open @ ('{' | '[' | '(')) => {
            let close = match open {
                '{' => '}',
                '[' => ']',
                _ => ')',
            };
            let mut cur = Cursor { text, pos: text.len() - text.trim_start().len() + 1 };
            let mut out = Vec::new();
            cur.skip_ws();
            if cur.peek() == Some(close) {
                cur.bump();
            } else {
                loop {
                    out.push(cur.integer()?);
                    cur.skip_ws();
                    match cur.bump() {
                        Some(',') => continue,
                        Some(c) if c == close => break,
                        _ => return Err(cur.error(format!("expected ',' or '{close}'"))),
                    }
                }
            }
            cur.skip_ws();
            if cur.peek().is_some() {
                return Err(cur.error("unexpected text after the vector"));
            }
            Ok(out)
        }
        _ => Ok(grid(text)?.into_iter().flatten().collect()),
    }
}

/// Brace form, the inverse of [`parse_matrix`].
pub fn render(v: &SeifertMatrix) -> String {
    v.to_string()
}
