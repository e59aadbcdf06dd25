//! Text forms of elements: `x0+2x3-x1` (or `0`) for `A_p(X)` and
//! `x0 x1^-1` (or `e`) for the free group, with point labels from the window.

use thiserror::Error;

use crate::coarse::{PointId, Window};
use crate::group::{ApElement, Letter, Prime, ReducedWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

fn is_label_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_space(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek().filter(|&c| f(c)) {
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn number(&mut self) -> Result<Option<i64>, ParseError> {
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Ok(None);
        }
        digits.parse().map(Some).map_err(|_| err(start, "number too large"))
    }

    fn label(&mut self, window: &Window) -> Result<PointId, ParseError> {
        let start = self.pos;
        if !self.peek().is_some_and(is_label_start) {
            return Err(err(start, "expected a point label"));
        }
        let label = self.take_while(is_label_char);
        window.position(label).ok_or_else(|| err(start, format!("unknown point {label:?}")))
    }
}

/// Parses a signed sum of multiples of points, e.g. `x0 + 2x3 - x1`.
pub fn parse_element(text: &str, window: &Window, p: Prime) -> Result<ApElement, ParseError> {
    let mut c = Cursor { text, pos: 0 };
    c.skip_space();
    if c.peek().is_none() {
        return Err(err(0, "empty element"));
    }
    let mut terms: Vec<(PointId, i64)> = Vec::new();
    let mut first = true;
    loop {
        c.skip_space();
        let sign = match c.peek() {
            Some('+') => {
                c.pos += 1;
                1
            }
            Some('-') => {
                c.pos += 1;
                -1
            }
            Some(_) if first => 1,
            Some(ch) => return Err(err(c.pos, format!("expected '+' or '-', found {ch:?}"))),
            None => break,
        };
        first = false;
        c.skip_space();
        let num_pos = c.pos;
        let coefficient = c.number()?;
        c.skip_space();
        if c.peek().is_some_and(|ch| ch == '*') {
            c.pos += 1;
            c.skip_space();
        }
        if c.peek().is_some_and(is_label_start) {
            let x = c.label(window)?;
            terms.push((x, sign * coefficient.unwrap_or(1)));
        } else if coefficient == Some(0) {
            // A bare `0` term.
        } else if coefficient.is_some() {
            return Err(err(num_pos, "a coefficient needs a point label"));
        } else {
            return Err(err(c.pos, "expected a coefficient or a point label"));
        }
    }
    Ok(ApElement::from_terms(p, terms))
}

/// Parses a space-separated word such as `x0 x1^-1 x2^2`; `e` is the identity.
pub fn parse_word(text: &str, window: &Window) -> Result<ReducedWord, ParseError> {
    let mut c = Cursor { text, pos: 0 };
    let mut letters = Vec::new();
    c.skip_space();
    if c.peek().is_none() {
        return Err(err(0, "empty word"));
    }
    loop {
        c.skip_space();
        let Some(ch) = c.peek() else { break };
        let start = c.pos;
        if !is_label_start(ch) {
            return Err(err(start, format!("expected a point label, found {ch:?}")));
        }
        let token = c.take_while(is_label_char);
        let point = match window.position(token) {
            Some(x) => Some(x),
            None if token == "e" => None,
            None => return Err(err(start, format!("unknown point {token:?}"))),
        };
        let mut exponent = 1i64;
        if c.peek() == Some('^') {
            c.pos += 1;
            let negative = c.peek() == Some('-');
            if negative {
                c.pos += 1;
            }
            let at = c.pos;
            let k = c.number()?.ok_or_else(|| err(at, "expected an exponent"))?;
            exponent = if negative { -k } else { k };
        }
        if let Some(x) = point {
            let letter = Letter::new(x, exponent < 0);
            letters.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
        }
        if c.peek().is_some_and(|ch| !ch.is_whitespace()) {
            return Err(err(c.pos, "expected whitespace between letters"));
        }
    }
    Ok(ReducedWord::from_letters(letters))
}
