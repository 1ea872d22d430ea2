//! Literal forms for exact series: compact text such as
//! `"1 + a1 + 2*a2 - 3/4*a1^2"` and `{i, j, num, den}` records.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{check_order, BivariateSeries, Exponent, DEFAULT_ORDER};
use crate::error::{Error, Result};

/// Record form of a single coefficient: `num/den * x1^i x2^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub i: u32,
    pub j: u32,
    pub num: i64,
    #[serde(default = "default_den")]
    pub den: i64,
}

fn default_den() -> i64 {
    1
}

impl BivariateSeries<BigRational> {
    /// Parses compact text at the given order. Terms above the order are dropped.
    ///
    /// Variables are `a1`/`a2`, with `alpha1`/`alpha2`, `mu1`/`mu2` and
    /// `x1`/`x2` accepted as synonyms. Coefficients may be integers, fractions
    /// (`3/4`) or decimals (`0.25`), and are read exactly.
    pub fn parse_with_order(text: &str, order: u32) -> Result<Self> {
        check_order(order)?;
        let terms = Parser::new(text).series()?;
        Ok(Self::from_terms(order, terms))
    }

    pub fn from_records(order: u32, records: &[SeriesTerm]) -> Result<Self> {
        check_order(order)?;
        let mut terms = Vec::with_capacity(records.len());
        for r in records {
            if r.den == 0 {
                return Err(Error::SeriesParse {
                    input: format!("{{i = {}, j = {}, num = {}, den = 0}}", r.i, r.j, r.num),
                    reason: "zero denominator".into(),
                });
            }
            let c = BigRational::new(BigInt::from(r.num), BigInt::from(r.den));
            terms.push(((r.i, r.j), c));
        }
        Ok(Self::from_terms(order, terms))
    }
}

impl FromStr for BivariateSeries<BigRational> {
    type Err = Error;

    /// Parses at [`DEFAULT_ORDER`].
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_order(s, DEFAULT_ORDER)
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Self {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::SeriesParse {
            input: self.input.to_string(),
            reason: format!("{} at byte {}", reason.into(), self.pos),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn series(&mut self) -> Result<Vec<(Exponent, BigRational)>> {
        let mut out = Vec::new();
        let mut sign = BigRational::one();
        match self.peek() {
            None => return self.fail("empty series"),
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (e, c) = self.term()?;
            out.push((e, sign.clone() * c));
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = BigRational::one(),
                Some(b'-') => sign = -BigRational::one(),
                Some(_) => return self.fail("expected `+` or `-`"),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Exponent, BigRational)> {
        let mut coeff = BigRational::one();
        let mut exp = (0u32, 0u32);
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() || b == b'.' => coeff *= self.number()?,
                Some(b) if b.is_ascii_alphabetic() => {
                    let (var, power) = self.power()?;
                    if var == 0 {
                        exp.0 += power;
                    } else {
                        exp.1 += power;
                    }
                }
                _ => return self.fail("expected a number or a variable"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((exp, coeff));
            }
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.input[start..self.pos]
    }

    fn number(&mut self) -> Result<BigRational> {
        let int_part = self.digits();
        let mut value = if int_part.is_empty() {
            BigRational::zero()
        } else {
            BigRational::from_integer(int_part.parse::<BigInt>().expect("ascii digits"))
        };
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits();
            if int_part.is_empty() && frac.is_empty() {
                return self.fail("malformed decimal");
            }
            if !frac.is_empty() {
                let num: BigInt = frac.parse().expect("ascii digits");
                let den = num_traits::pow(BigInt::from(10), frac.len());
                value += BigRational::new(num, den);
            }
        } else if int_part.is_empty() {
            return self.fail("expected digits");
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.digits();
            if den.is_empty() {
                return self.fail("expected a denominator");
            }
            let den: BigInt = den.parse().expect("ascii digits");
            if den.is_zero() {
                return self.fail("zero denominator");
            }
            value /= BigRational::from_integer(den);
        }
        Ok(value)
    }

    fn power(&mut self) -> Result<(usize, u32)> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let var = match &self.input[start..self.pos] {
            "a1" | "alpha1" | "mu1" | "x1" => 0,
            "a2" | "alpha2" | "mu2" | "x2" => 1,
            other => {
                self.pos = start;
                return self.fail(format!("unknown variable `{other}`"));
            }
        };
        let mut power = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let d = self.digits();
            power = match d.parse::<u32>() {
                Ok(p) => p,
                Err(_) => return self.fail("expected an integer exponent"),
            };
        }
        Ok((var, power))
    }
}
