//! Knot expression grammar and canonical printer.
//!
//! Grammar: `fig8`, `t(a,b)`, `mirror(<expr>)`, `<expr>#<expr>` with `#`
//! left-associative; whitespace is ignored everywhere. Parse errors report
//! the byte offset of the offending input.

use crate::{Error, KnotExpr, Result};

/// Parses a knot expression.
pub fn parse(input: &str) -> Result<KnotExpr> {
    let mut p = Parser { input: input.as_bytes(), pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(expr)
}

/// Canonical printer: `fig8`, `t(a,b)`, `mirror(...)`, parts joined by `#`,
/// no whitespace. `parse(print(k))` reproduces `k` up to connected-sum
/// flattening.
pub fn print(knot: &KnotExpr) -> String {
    match knot {
        KnotExpr::FigureEight => "fig8".to_string(),
        KnotExpr::Torus(a, b) => format!("t({a},{b})"),
        KnotExpr::Mirror(inner) => format!("mirror({})", print(inner)),
        KnotExpr::ConnectedSum(parts) => parts.iter().map(print).collect::<Vec<_>>().join("#"),
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", ch as char)))
        }
    }

    fn expr(&mut self) -> Result<KnotExpr> {
        let mut parts = vec![self.term()?];
        while self.peek() == Some(b'#') {
            self.pos += 1;
            parts.push(self.term()?);
        }
        KnotExpr::connected_sum(parts)
    }

    fn term(&mut self) -> Result<KnotExpr> {
        self.skip_ws();
        if self.eat_keyword("fig8") {
            return Ok(KnotExpr::fig8());
        }
        if self.eat_keyword("mirror") {
            self.expect(b'(')?;
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner.mirror());
        }
        if self.eat_keyword("t") {
            self.expect(b'(')?;
            let a = self.integer()?;
            self.expect(b',')?;
            let b = self.integer()?;
            self.expect(b')')?;
            return KnotExpr::torus(a, b).map_err(|e| Error::Parse {
                offset: self.pos,
                message: e.to_string(),
            });
        }
        Err(self.error("expected 'fig8', 't(a,b)' or 'mirror(...)'"))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if end <= self.input.len() && &self.input[self.pos..end] == kw.as_bytes() {
            // A keyword must not run into further identifier characters.
            let next = self.input.get(end).copied();
            if !matches!(next, Some(c) if c.is_ascii_alphanumeric()) {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.input.get(self.pos) == Some(&b'-');
        if negative {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }
}
