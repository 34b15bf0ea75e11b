use num_bigint::BigInt;

use super::field::{Field, Rational};
use super::params::ParameterContext;
use super::scalar::Scalar;
use super::CoeffError;

/// Parse a scalar expression: integers, `i`/`I`, declared parameter names,
/// `+ - * / ^` (nonnegative integer exponents) and parentheses.
pub fn parse_scalar(text: &str, ctx: &ParameterContext) -> Result<Scalar, CoeffError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
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
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> CoeffError {
        CoeffError::Parse {
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

    fn expr(&mut self) -> Result<Scalar, CoeffError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, CoeffError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let f = self.unary()?;
            acc = if c == b'*' {
                acc * f
            } else {
                acc.checked_div(&f).map_err(|_| CoeffError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, CoeffError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, CoeffError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .expect("ascii")
                .parse()
                .map_err(|_| CoeffError::Parse {
                    pos: start,
                    msg: "exponent too large".into(),
                })?;
            let mut acc = Scalar::one();
            for _ in 0..e {
                acc = acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, CoeffError> {
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
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let n: BigInt = s.parse().expect("digits");
                Ok(Scalar::Rat(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name == "i" || name == "I" {
                    return Ok(Scalar::i());
                }
                match self.ctx.index_of(name) {
                    Some(k) => Ok(Scalar::param(k)),
                    None => Err(CoeffError::UnknownParameter {
                        name: name.to_string(),
                        pos: start,
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parse a rational number literal such as `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rational, CoeffError> {
    match parse_scalar(text, &ParameterContext::new())? {
        Scalar::Rat(r) => Ok(r),
        _ => Err(CoeffError::Parse {
            pos: 0,
            msg: "expected a rational number".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders_round_trip() {
        let ctx = ParameterContext::from_names(&["r4", "r5", "B"]).unwrap();
        for s in ["r4/r5^2", "1/2*i", "2 - 3*i", "-B^2 + 1", "(1 + i)*B"] {
            let v = parse_scalar(s, &ctx).unwrap();
            let again = parse_scalar(&v.render(&ctx), &ctx).unwrap();
            assert_eq!(v, again, "{s}");
        }
        assert_eq!(parse_scalar("1/2 + 1/3", &ctx).unwrap(), Scalar::rat(5, 6));
        assert_eq!(parse_scalar("I*I", &ctx).unwrap(), Scalar::int(-1));
    }

    #[test]
    fn errors_have_positions() {
        let ctx = ParameterContext::new();
        match parse_scalar("1 + x", &ctx) {
            Err(CoeffError::UnknownParameter { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_scalar("1/0", &ctx),
            Err(CoeffError::Parse { .. })
        ));
        assert!(matches!(
            parse_scalar("(1", &ctx),
            Err(CoeffError::Parse { .. })
        ));
    }
}
