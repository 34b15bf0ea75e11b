use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rationals. `BigRational` keeps the denominator positive and the
/// fraction reduced, with zero stored as `0/1`.
pub type Rational = BigRational;

/// An exact field in which zero testing is decidable.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;

    /// True when the value belongs to the rationals.
    fn is_rational(&self) -> bool;

    /// The rational value, if [`Field::is_rational`] holds.
    fn to_rational(&self) -> Option<Rational>;

    /// Complex conjugation (identity on real fields).
    fn conj(&self) -> Self;

    /// True for values whose rendering needs parentheses as a factor.
    fn is_compound(&self) -> bool {
        false
    }

    /// True when the rendering starts with a minus sign.
    fn is_negative_display(&self) -> bool {
        false
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_rational(&self) -> bool {
        true
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_negative_display(&self) -> bool {
        self.is_negative()
    }
}

/// Rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
