use num_bigint::BigInt;

use super::{Blade, ExteriorElement, ExteriorError};
use crate::coeff::{Field, ParameterContext, Rational, Scalar};

/// Parse an exterior element such as `-2*e3` or `e0^e3 + r4/r5^2*e1^e2`.
/// Generators are `e0 … e{n-1}`; `*` between forms and `^` between forms
/// are both the wedge product, `x^k` with an integer `k` is a power of a scalar.
pub fn parse_element(
    text: &str,
    n: usize,
    ctx: &ParameterContext,
) -> Result<ExteriorElement, ExteriorError> {
    let names: Vec<String> = (0..n).map(|j| format!("e{j}")).collect();
    parse_element_with(text, &names, ctx)
}

/// Like [`parse_element`] with explicit generator names.
pub fn parse_element_with(
    text: &str,
    generators: &[String],
    ctx: &ParameterContext,
) -> Result<ExteriorElement, ExteriorError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
        gens: generators,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a ParameterContext,
    gens: &'a [String],
}

fn scalar_part(e: &ExteriorElement) -> Option<Scalar> {
    if e.terms().all(|(b, _)| *b == Blade::ONE) {
        Some(e.coefficient_of(Blade::ONE))
    } else {
        None
    }
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.gens.len()
    }

    fn error(&self, msg: &str) -> ExteriorError {
        ExteriorError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ExteriorElement, ExteriorError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExteriorElement, ExteriorError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let f = self.unary()?;
            acc = if c == b'*' {
                acc.wedge(&f)?
            } else {
                let s = scalar_part(&f).ok_or(ExteriorError::Parse {
                    pos: at,
                    msg: "can only divide by a scalar".into(),
                })?;
                let inv = s.inv().ok_or(ExteriorError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
                acc.scale(&inv)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExteriorElement, ExteriorError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.wedge_chain(),
        }
    }

    fn wedge_chain(&mut self) -> Result<ExteriorElement, ExteriorError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                let at = self.pos;
                let e = self.integer()?;
                let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
                let s = scalar_part(&acc).ok_or(ExteriorError::Parse {
                    pos: at,
                    msg: "only scalars can be raised to a power".into(),
                })?;
                let mut p = Scalar::one();
                for _ in 0..e {
                    p = p * &s;
                }
                acc = ExteriorElement::scalar(self.n(), p);
            } else {
                let rhs = self.atom()?;
                acc = acc.wedge(&rhs)?;
            }
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, ExteriorError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .expect("digits"))
    }

    fn atom(&mut self) -> Result<ExteriorElement, ExteriorError> {
        let n = self.n();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(ExteriorElement::scalar(
                    n,
                    Scalar::Rat(Rational::from_integer(v)),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if let Some(j) = self.gens.iter().position(|g| g == name) {
                    return Ok(ExteriorElement::generator(n, j));
                }
                if name == "i" || name == "I" {
                    return Ok(ExteriorElement::scalar(n, Scalar::i()));
                }
                match self.ctx.index_of(name) {
                    Some(k) => Ok(ExteriorElement::scalar(n, Scalar::param(k))),
                    None => Err(ExteriorError::Parse {
                        pos: start,
                        msg: format!("unknown name '{name}'"),
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sage_style_forms() {
        let ctx = ParameterContext::from_names(&["r4", "r5"]).unwrap();
        let x = parse_element("e0^e3 + r4/r5^2*e1^e2", 4, &ctx).unwrap();
        assert_eq!(x.render(&ctx), "e0^e3 + r4/r5^2*e1^e2");
        let t = parse_element("-2*e3", 4, &ctx).unwrap();
        assert_eq!(t.render(&ctx), "-2*e3");
        let w = parse_element("e3^e0", 4, &ctx).unwrap();
        assert_eq!(w.render(&ctx), "-e0^e3");
        let c = parse_element("(1 + I)*e1 - i*e2", 4, &ctx).unwrap();
        assert_eq!(c.render(&ctx), "(1 + i)*e1 - i*e2");
    }

    #[test]
    fn rejects_bad_input() {
        let ctx = ParameterContext::new();
        assert!(parse_element("e4", 4, &ctx).is_err());
        assert!(parse_element("e1/e2", 4, &ctx).is_err());
        assert!(parse_element("e1^2", 4, &ctx).is_err());
    }
}
