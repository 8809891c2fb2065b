//! Text syntax for integer polynomials.
//!
//! Accepted forms (whitespace-insensitive, one variable symbol per input):
//!
//! * `x^8 - 97`, `x^2 + x + 1`, `3x^2 - 16*97`, `2*x*x + 1`
//! * a coefficient list, lowest degree first: `[-97, 0, 0, 0, 0, 0, 0, 0, 1]`
//!
//! The Unicode minus sign `−` is treated as `-`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

pub fn parse_poly(input: &str) -> Result<IntPoly> {
    let s: String = input
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unterminated coefficient list in {input:?}")))?;
        if inner.is_empty() {
            return Ok(IntPoly::zero());
        }
        let coeffs = inner
            .split(',')
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {input:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(IntPoly::new(coeffs));
    }
    Parser {
        chars: s.chars().collect(),
        pos: 0,
        var: None,
        input,
    }
    .parse()
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    var: Option<char>,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at position {} in {:?}",
            self.pos, self.input
        ))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<IntPoly> {
        let mut acc = IntPoly::zero();
        let mut first = true;
        while self.pos < self.chars.len() {
            let neg = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Err(self.err("expected '+' or '-'")),
            };
            first = false;
            let term = self.term()?;
            acc = if neg { &acc - &term } else { &acc + &term };
        }
        if first {
            return Err(self.err("no terms"));
        }
        Ok(acc)
    }

    /// factor (('*')? factor)*
    fn term(&mut self) -> Result<IntPoly> {
        let mut coeff = BigInt::one();
        let mut deg = 0usize;
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let digits: String = self.chars[start..self.pos].iter().collect();
                    coeff *= digits.parse::<BigInt>().expect("digits");
                }
                Some(c) if c.is_alphabetic() => {
                    match self.var {
                        None => self.var = Some(c),
                        Some(v) if v == c => {}
                        Some(v) => {
                            return Err(self
                                .err(&format!("second variable symbol {c:?} (already saw {v:?})")))
                        }
                    }
                    self.pos += 1;
                    let mut e = 1usize;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let start = self.pos;
                        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            self.pos += 1;
                        }
                        if start == self.pos {
                            return Err(self.err("missing exponent"));
                        }
                        let digits: String = self.chars[start..self.pos].iter().collect();
                        e = digits
                            .parse()
                            .map_err(|_| self.err("exponent out of range"))?;
                    }
                    deg += e;
                }
                _ => return Err(self.err("expected a number or variable")),
            }
            factors += 1;
            match self.peek() {
                Some('*') => self.pos += 1,
                Some(c) if c.is_ascii_digit() || c.is_alphabetic() => {}
                _ => break,
            }
        }
        debug_assert!(factors > 0);
        if deg > 1 << 20 {
            return Err(self.err("degree too large"));
        }
        if coeff.is_zero() {
            return Ok(IntPoly::zero());
        }
        Ok(IntPoly::monomial(coeff, deg))
    }
}
