//! Recursive-descent parser for knot expressions.
//!
//! Grammar:
//! ```text
//! knot-expr := term ("+" term)*
//! term      := [count "*"] atom
//! atom      := "T(" int "," int ")" | "m(" atom ")" | "r(" atom ")" | "U" | name
//! name      := "6_1" | "3_1" | "Wh" | extension-atlas name
//! count     := positive integer
//! ```
//! Whitespace is insignificant. `3_1` desugars to `T(2,3)`; `Wh` is the
//! 2-twisted positive Whitehead double of the trefoil. Errors carry the
//! byte offset and the expected-token set.

use knotgraph::knots::{FormalKnot, GeneratorKnot, NamedKnot};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8, expected: &str) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.expected(expected))
        }
    }

    fn expected(&self, what: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: format!("expected {what}"),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.text.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_from = self.pos;
        while self
            .text
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == digits_from {
            self.pos = start;
            return Err(self.expected("an integer"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError {
                offset: start,
                message: "integer out of range".to_string(),
            })
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .text
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.text[start..self.pos]).into_owned()
    }

    /// atom; `None` is the unknot.
    fn atom(&mut self) -> Result<Option<GeneratorKnot>, ParseError> {
        let offset = self.pos;
        match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                self.eat(b'(', "'(' after T")?;
                let p = self.integer()?;
                self.eat(b',', "',' between torus parameters")?;
                let q = self.integer()?;
                self.eat(b')', "')' closing T(..)")?;
                let g = GeneratorKnot::torus(p, q).map_err(|e| ParseError {
                    offset,
                    message: e.to_string(),
                })?;
                Ok(Some(g))
            }
            Some(b'm') | Some(b'r') if self.text.get(self.pos + 1) == Some(&b'(') => {
                let wrap = self.text[self.pos];
                self.pos += 2;
                let inner = self.atom()?;
                self.eat(b')', "')' closing the decoration")?;
                Ok(inner.map(|g| if wrap == b'm' { g.mirror() } else { g.reverse() }))
            }
            Some(b'U')
                if !self
                    .text
                    .get(self.pos + 1)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') =>
            {
                self.pos += 1;
                Ok(None)
            }
            Some(b) if b.is_ascii_alphanumeric() => {
                let name = self.word();
                let g = match name.as_str() {
                    "3_1" => GeneratorKnot::torus(2, 3).unwrap(),
                    "6_1" => GeneratorKnot::stevedore(),
                    "Wh" => GeneratorKnot::whitehead_double(),
                    other => GeneratorKnot::named(NamedKnot::Custom(other.to_string()))
                        .map_err(|e| ParseError {
                            offset,
                            message: e.to_string(),
                        })?,
                };
                Ok(Some(g))
            }
            _ => Err(self.expected("'T(', 'm(', 'r(', 'U', or a knot name")),
        }
    }

    fn term(&mut self) -> Result<FormalKnot, ParseError> {
        self.skip_ws();
        let mut count = 1i64;
        let checkpoint = self.pos;
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            // Could be a count (digits then '*') or a name like 6_1.
            let probe = self.integer();
            if let Ok(n) = probe {
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if n < 1 {
                        return Err(ParseError {
                            offset: checkpoint,
                            message: "count must be a positive integer".to_string(),
                        });
                    }
                    count = n;
                } else {
                    self.pos = checkpoint;
                }
            } else {
                self.pos = checkpoint;
            }
        }
        let atom = self.atom()?;
        Ok(match atom {
            Some(g) => FormalKnot::unknot().with(g, count as u32),
            None => FormalKnot::unknot(),
        })
    }

    fn expr(&mut self) -> Result<FormalKnot, ParseError> {
        let mut knot = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            knot = knot.connected_sum(&self.term()?);
        }
        self.skip_ws();
        if self.pos != self.text.len() {
            return Err(self.expected("'+' or end of input"));
        }
        Ok(knot)
    }
}

/// Parses a knot expression into a formal connected sum.
pub fn parse_knot(text: &str) -> Result<FormalKnot, ParseError> {
    Parser {
        text: text.as_bytes(),
        pos: 0,
    }
    .expr()
}
