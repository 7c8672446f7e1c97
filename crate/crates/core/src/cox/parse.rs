//! Text syntax for forms: `X3*X4*Y1^2 + X1X5Y_2^2 + 2X_{10}Y3^2 = 0`.
//!
//! Variables are `X` or `Y` followed by an index written as `7`, `_7` or
//! `_{7}`. Exponents are `^2` or `^{2}`. The `*` between factors is optional.

use super::CoxForm;
use crate::error::{Error, Result};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, text }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.text))
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    /// `7`, `{7}`.
    fn braced_number(&mut self) -> Result<u64> {
        let braced = self.eat('{');
        let n = self.number().ok_or_else(|| self.error("expected a number"))?;
        if braced && !self.eat('}') {
            return Err(self.error("expected '}'"));
        }
        Ok(n)
    }
}

pub(super) fn parse(
    text: &str,
    char: u64,
    num_vars: usize,
    resolve: impl Fn(char, usize) -> Option<usize>,
) -> Result<CoxForm> {
    let mut cur = Cursor::new(text);
    let mut raw: Vec<(Vec<u32>, i64)> = Vec::new();
    if cur.peek().is_none() {
        return Err(cur.error("empty equation"));
    }
    loop {
        let mut sign = 1i64;
        if cur.eat('-') {
            sign = -1;
        } else {
            cur.eat('+');
        }
        let mut coeff = match cur.number() {
            Some(n) => {
                cur.eat('*');
                (n % char) as i64
            }
            None => 1,
        };
        coeff *= sign;
        let mut exponents = vec![0u32; num_vars];
        let mut factors = 0;
        while let Some(kind @ ('X' | 'Y')) = cur.peek() {
            cur.pos += 1;
            cur.eat('_');
            let index = cur.braced_number()? as usize;
            let var = resolve(kind, index).ok_or_else(|| cur.error(&format!("unknown variable {kind}{index}")))?;
            let exp = if cur.eat('^') { cur.braced_number()? } else { 1 };
            exponents[var] += u32::try_from(exp).map_err(|_| cur.error("exponent too large"))?;
            factors += 1;
            cur.eat('*');
        }
        if factors == 0 && cur.chars.get(cur.pos.wrapping_sub(1)).is_none_or(|c| !c.is_ascii_digit()) {
            return Err(cur.error("expected a term"));
        }
        raw.push((exponents, coeff));
        match cur.peek() {
            None => break,
            Some('+' | '-') => continue,
            Some('=') => {
                cur.pos += 1;
                if cur.number() != Some(0) || cur.peek().is_some() {
                    return Err(cur.error("only '= 0' may follow the form"));
                }
                break;
            }
            Some(c) => return Err(cur.error(&format!("unexpected {c:?}"))),
        }
    }
    CoxForm::new(char, num_vars, raw)
}
