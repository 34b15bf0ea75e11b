use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{LieError, StructureConstants};
use crate::coeff::{ParameterContext, Rational, Scalar};

/// Parse Salamon shorthand such as `(0,0,0,12,13,14+2*23)` for an `n`-dimensional algebra.
pub fn parse_salamon(text: &str, n: usize) -> Result<StructureConstants, LieError> {
    if n > 9 {
        return Err(LieError::Salamon {
            pos: 0,
            msg: format!("dimension {n} exceeds 9"),
        });
    }
    let entries = Parser {
        src: text.as_bytes(),
        pos: 0,
        n,
    }
    .algebra()?;
    if entries.len() != n {
        return Err(LieError::Salamon {
            pos: text.len(),
            msg: format!("expected {n} entries, found {}", entries.len()),
        });
    }
    let mut s = StructureConstants::abelian(n, ParameterContext::new());
    for (m, terms) in entries.into_iter().enumerate() {
        for (j, k, c) in terms {
            s.add(m, j, k, Scalar::Rat(Rational::from_integer(c)))?;
        }
    }
    Ok(s)
}

/// Parse Salamon shorthand, taking the dimension from the number of entries.
pub fn parse_salamon_auto(text: &str) -> Result<StructureConstants, LieError> {
    let n = text.matches(',').count() + 1;
    parse_salamon(text, n.min(10))
}

type Entry = Vec<(usize, usize, BigInt)>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, LieError> {
        Err(LieError::Salamon {
            pos,
            msg: msg.into(),
        })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), LieError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn algebra(&mut self) -> Result<Vec<Entry>, LieError> {
        self.expect(b'(')?;
        let mut out = vec![self.entry()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(self.entry()?);
        }
        self.expect(b')')?;
        if self.peek().is_some() {
            return self.err(self.pos, "unexpected trailing input");
        }
        Ok(out)
    }

    fn entry(&mut self) -> Result<Entry, LieError> {
        let start = self.pos;
        if self.peek() == Some(b'0') {
            let at = self.pos;
            let next = self.src.get(at + 1).copied();
            if !next.is_some_and(|c| c.is_ascii_digit() || c == b'*') {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
            let (j, k, c) = self.term()?;
            if !seen.insert((j.min(k), j.max(k))) {
                return self.err(at, format!("duplicate pair {}{}", j + 1, k + 1));
            }
            out.push((j, k, c * sign));
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(b',') | Some(b')') => break,
                None => return self.err(self.pos, "unexpected end of input"),
                Some(_) => return self.err(self.pos, "malformed term"),
            }
            self.pos += 1;
        }
        if out.is_empty() {
            return self.err(start, "empty entry");
        }
        Ok(out)
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<(usize, usize, BigInt), LieError> {
        self.peek();
        let start = self.pos;
        let first = self.digits().to_vec();
        if first.is_empty() {
            return self.err(start, "expected a digit pair");
        }
        let (coeff, pair_at, pair) = if self.peek() == Some(b'*') {
            self.pos += 1;
            self.peek();
            let at = self.pos;
            let c: BigInt = std::str::from_utf8(&first)
                .expect("ascii")
                .parse()
                .expect("digits");
            (c, at, self.digits().to_vec())
        } else {
            (BigInt::from(1), start, first)
        };
        if pair.len() != 2 {
            return self.err(pair_at, "a term must be two digits");
        }
        let j = (pair[0] - b'0') as usize;
        let k = (pair[1] - b'0') as usize;
        if j == 0 || j > self.n {
            return self.err(pair_at, format!("index {j} out of range 1..{}", self.n));
        }
        if k == 0 || k > self.n {
            return self.err(pair_at + 1, format!("index {k} out of range 1..{}", self.n));
        }
        if j == k {
            return self.err(pair_at, format!("repeated index in {j}{k}"));
        }
        Ok((j - 1, k - 1, coeff))
    }
}
