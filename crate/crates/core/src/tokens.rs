//! Whitespace tokenizer shared by the plain-text instance formats.
//! `#` starts a comment that runs to the end of the line.

use crate::error::{Error, Result};

pub(crate) struct Tokens<'a> {
    iter: Box<dyn Iterator<Item = &'a str> + 'a>,
    position: usize,
}

impl<'a> Tokens<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let iter = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        Self {
            iter: Box::new(iter),
            position: 0,
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.position,
            message: message.into(),
        }
    }

    fn next_raw(&mut self, what: &str) -> Result<&'a str> {
        let tok = self
            .iter
            .next()
            .ok_or_else(|| self.error(format!("unexpected end of input, expected {what}")))?;
        self.position += 1;
        Ok(tok)
    }

    pub(crate) fn usize(&mut self, what: &str) -> Result<usize> {
        let tok = self.next_raw(what)?;
        tok.parse()
            .map_err(|_| self.error(format!("expected integer {what}, found `{tok}`")))
    }

    pub(crate) fn f64(&mut self, what: &str) -> Result<f64> {
        let tok = self.next_raw(what)?;
        let v: f64 = tok
            .parse()
            .map_err(|_| self.error(format!("expected decimal {what}, found `{tok}`")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.error(format!("non-finite {what} `{tok}`")))
        }
    }

    pub(crate) fn finish(mut self) -> Result<()> {
        match self.iter.next() {
            None => Ok(()),
            Some(tok) => {
                self.position += 1;
                Err(self.error(format!("trailing token `{tok}`")))
            }
        }
    }
}

/// Rejects table sizes that would not fit a desk-scale instance.
pub(crate) fn checked_size(tokens: &Tokens<'_>, dims: &[usize], limit: usize) -> Result<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&n| n <= limit)
        .ok_or_else(|| tokens.error(format!("table size {dims:?} exceeds limit {limit}")))
}
