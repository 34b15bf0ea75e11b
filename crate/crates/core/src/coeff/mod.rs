//! Exact coefficient domains: rationals, Gaussian rationals, parameter
//! polynomials and their fractions.

mod field;
mod gaussian;
mod params;
mod parse;
mod poly;
mod ratfunc;
mod scalar;

pub use field::{rat, Field, Rational};
pub use gaussian::GaussianRational;
pub use params::{Parameter, ParameterContext};
pub use parse::{parse_rational, parse_scalar};
pub use poly::{Monomial, Polynomial};
pub use ratfunc::{Poly, RationalFunction};
pub use scalar::{param_pow, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes a denominator vanish (parameters: {})", params.join(", "))]
    ZeroDenominator { params: Vec<String> },
    #[error("invalid parameter name '{0}'")]
    InvalidName(String),
    #[error("parameter '{0}' declared twice")]
    DuplicateParameter(String),
    #[error("unknown parameter '{name}' at position {pos}")]
    UnknownParameter { name: String, pos: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
