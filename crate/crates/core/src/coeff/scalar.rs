use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Rational};
use super::gaussian::GaussianRational;
use super::params::ParameterContext;
use super::poly::{default_name, Monomial};
use super::ratfunc::{Poly, RationalFunction};
use super::CoeffError;

/// An exact coefficient. Values are kept in the simplest variant that
/// represents them, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(Rational),
    Gauss(GaussianRational),
    Poly(Poly),
    Frac(RationalFunction),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Rat(Rational::from_i64(v))
    }

    pub fn rat(num: i64, den: i64) -> Self {
        Scalar::Rat(super::field::rat(num, den))
    }

    pub fn i() -> Self {
        Scalar::Gauss(GaussianRational::i())
    }

    pub fn param(index: usize) -> Self {
        Scalar::Poly(Poly::var(index))
    }

    pub fn from_gaussian(g: GaussianRational) -> Self {
        match g.to_rational() {
            Some(r) => Scalar::Rat(r),
            None => Scalar::Gauss(g),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.as_constant() {
            Some(c) => Scalar::from_gaussian(c),
            None => Scalar::Poly(p),
        }
    }

    pub fn from_frac(f: RationalFunction) -> Self {
        if f.is_polynomial() {
            let (num, den) = f.into_parts();
            let c = den.as_constant().expect("constant").inv().expect("nonzero");
            Scalar::from_poly(num.scale(&c))
        } else {
            Scalar::Frac(f)
        }
    }

    /// `num/den` as a canonical scalar.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self, CoeffError> {
        RationalFunction::new(num, den)
            .map(Scalar::from_frac)
            .ok_or(CoeffError::DivisionByZero)
    }

    pub fn to_gaussian(&self) -> Option<GaussianRational> {
        match self {
            Scalar::Rat(r) => Some(GaussianRational::real(r.clone())),
            Scalar::Gauss(g) => Some(g.clone()),
            _ => None,
        }
    }

    pub fn to_poly(&self) -> Option<Poly> {
        match self {
            Scalar::Rat(r) => Some(Poly::constant(GaussianRational::real(r.clone()))),
            Scalar::Gauss(g) => Some(Poly::constant(g.clone())),
            Scalar::Poly(p) => Some(p.clone()),
            Scalar::Frac(_) => None,
        }
    }

    pub fn to_frac(&self) -> RationalFunction {
        match self {
            Scalar::Frac(f) => f.clone(),
            other => RationalFunction::from_poly(other.to_poly().expect("polynomial")),
        }
    }

    /// True when no parameter occurs.
    pub fn is_constant(&self) -> bool {
        matches!(self, Scalar::Rat(_) | Scalar::Gauss(_))
    }

    pub fn params(&self) -> BTreeSet<usize> {
        match self {
            Scalar::Rat(_) | Scalar::Gauss(_) => BTreeSet::new(),
            Scalar::Poly(p) => p.vars(),
            Scalar::Frac(f) => {
                let mut s = f.numer().vars();
                s.extend(f.denom().vars());
                s
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, CoeffError> {
        let inv = other.inv().ok_or(CoeffError::DivisionByZero)?;
        Ok(self.clone() * &inv)
    }

    /// Replace parameters by values and return the result in canonical form.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<usize, Scalar>,
        ctx: &ParameterContext,
    ) -> Result<Scalar, CoeffError> {
        let eval = |p: &Poly| -> Scalar {
            p.evaluate(
                |c| Scalar::from_gaussian(c.clone()),
                |i| {
                    assignment
                        .get(&i)
                        .cloned()
                        .unwrap_or_else(|| Scalar::param(i))
                },
            )
        };
        match self {
            Scalar::Rat(_) | Scalar::Gauss(_) => Ok(self.clone()),
            Scalar::Poly(p) => Ok(eval(p)),
            Scalar::Frac(f) => {
                let den = eval(f.denom());
                if den.is_zero() {
                    let params = f
                        .denom()
                        .vars()
                        .into_iter()
                        .filter(|i| assignment.contains_key(i))
                        .map(|i| ctx.name(i))
                        .collect();
                    return Err(CoeffError::ZeroDenominator { params });
                }
                eval(f.numer()).checked_div(&den)
            }
        }
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        match self {
            Scalar::Rat(r) => r.to_string(),
            Scalar::Gauss(g) => g.to_string(),
            Scalar::Poly(p) => p.fmt_with(names),
            Scalar::Frac(f) => {
                let wrap = |p: &Poly, strict: bool| {
                    let s = p.fmt_with(names);
                    let single = p.num_terms() == 1
                        && !p.terms().any(|(_, c)| c.is_compound())
                        && (!strict
                            || p.terms().all(|(m, c)| {
                                c.is_one() && m.exponents().iter().filter(|e| **e > 0).count() <= 1
                            }));
                    if single {
                        s
                    } else {
                        format!("({s})")
                    }
                };
                format!("{}/{}", wrap(f.numer(), false), wrap(f.denom(), true))
            }
        }
    }

    pub fn render(&self, ctx: &ParameterContext) -> String {
        self.fmt_with(&ctx.namer())
    }

    fn level(&self) -> u8 {
        match self {
            Scalar::Rat(_) => 0,
            Scalar::Gauss(_) => 1,
            Scalar::Poly(_) => 2,
            Scalar::Frac(_) => 3,
        }
    }

    fn combine(
        &self,
        other: &Scalar,
        rat: impl Fn(&Rational, &Rational) -> Rational,
        gauss: impl Fn(GaussianRational, &GaussianRational) -> GaussianRational,
        poly: impl Fn(&Poly, &Poly) -> Poly,
        frac: impl Fn(&RationalFunction, &RationalFunction) -> RationalFunction,
    ) -> Scalar {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (self, other) {
            return Scalar::Rat(rat(a, b));
        }
        match self.level().max(other.level()) {
            0 | 1 => Scalar::from_gaussian(gauss(
                self.to_gaussian().expect("constant"),
                &other.to_gaussian().expect("constant"),
            )),
            2 => Scalar::from_poly(poly(
                &self.to_poly().expect("poly"),
                &other.to_poly().expect("poly"),
            )),
            _ => Scalar::from_frac(frac(&self.to_frac(), &other.to_frac())),
        }
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.combine(
            other,
            |a, b| a + b,
            |a, b| a + b,
            |a, b| a + b,
            |a, b| a.add(b),
        )
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        self.combine(
            other,
            |a, b| a * b,
            |a, b| a * b,
            |a, b| a * b,
            |a, b| a.mul(b),
        )
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(&-rhs.clone())
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.add_ref(&-rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(&-rhs.clone())
    }
}

impl<'a> Mul<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Gauss(g) => Scalar::Gauss(-g),
            Scalar::Poly(p) => Scalar::Poly(-p),
            Scalar::Frac(f) => Scalar::Frac(f.neg()),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::Rat(<Rational as Field>::zero())
    }
    fn one() -> Self {
        Scalar::Rat(<Rational as Field>::one())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if Field::is_zero(r))
    }
    fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if Field::is_one(r))
    }
    fn inv(&self) -> Option<Self> {
        match self {
            Scalar::Rat(r) => r.inv().map(Scalar::Rat),
            Scalar::Gauss(g) => g.inv().map(Scalar::from_gaussian),
            Scalar::Poly(p) => RationalFunction::new(Poly::one(), p.clone()).map(Scalar::from_frac),
            Scalar::Frac(f) => f.inv().map(Scalar::from_frac),
        }
    }
    fn from_i64(v: i64) -> Self {
        Scalar::int(v)
    }
    fn from_rational(r: &Rational) -> Self {
        Scalar::Rat(r.clone())
    }
    fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }
    fn to_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }
    fn conj(&self) -> Self {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Gauss(g) => Scalar::Gauss(g.conj()),
            Scalar::Poly(p) => Scalar::from_poly(p.conj()),
            Scalar::Frac(f) => Scalar::from_frac(f.conj()),
        }
    }
    fn is_compound(&self) -> bool {
        match self {
            Scalar::Rat(_) => false,
            Scalar::Gauss(g) => g.is_compound(),
            Scalar::Poly(p) => p.is_compound(),
            Scalar::Frac(_) => false,
        }
    }
    fn is_negative_display(&self) -> bool {
        self.fmt_with(&default_name).starts_with('-')
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_name))
    }
}

/// Monomial `param^exp` as a scalar.
pub fn param_pow(index: usize, exp: u32) -> Scalar {
    Scalar::from_poly(Poly::term(
        Monomial::var_pow(index, exp),
        GaussianRational::from_i64(1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ParameterContext {
        ParameterContext::from_names(&["r4", "r5", "B", "r1"]).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(Scalar::rat(1, 2) + Scalar::rat(1, 3), Scalar::rat(5, 6));
    }

    #[test]
    fn i_squared() {
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::int(-1));
    }

    #[test]
    fn fraction_renders() {
        let c = ctx();
        let f = Scalar::param(0).checked_div(&param_pow(1, 2)).unwrap();
        assert_eq!(f.render(&c), "r4/r5^2");
        let g = Scalar::int(1)
            .checked_div(&(Scalar::param(0) * Scalar::param(1)))
            .unwrap();
        assert_eq!(g.render(&c), "1/(r4*r5)");
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            Scalar::int(1).checked_div(&Scalar::zero()),
            Err(CoeffError::DivisionByZero)
        );
    }

    #[test]
    fn conjugation() {
        let z = Scalar::int(2) + Scalar::int(3) * Scalar::i();
        assert_eq!(z.conj(), Scalar::int(2) - Scalar::int(3) * Scalar::i());
        let ib = Scalar::i() * Scalar::param(2);
        assert_eq!(ib.conj(), -ib.clone());
        assert_eq!(Scalar::param(3).conj(), Scalar::param(3));
    }

    #[test]
    fn substitution() {
        let c = ctx();
        let r1 = Scalar::param(3);
        let e = r1 + Scalar::int(2);
        let mut a = BTreeMap::new();
        a.insert(3, Scalar::int(-2));
        assert_eq!(e.substitute(&a, &c).unwrap(), Scalar::zero());

        let f = Scalar::param(0).checked_div(&param_pow(1, 2)).unwrap();
        let mut a = BTreeMap::new();
        a.insert(0, Scalar::int(1));
        a.insert(1, Scalar::int(1));
        assert_eq!(f.substitute(&a, &c).unwrap(), Scalar::one());

        let b = Scalar::param(2);
        let e = b.clone() * (b - Scalar::one());
        let mut a = BTreeMap::new();
        a.insert(2, Scalar::one());
        assert_eq!(e.substitute(&a, &c).unwrap(), Scalar::zero());

        let mut a = BTreeMap::new();
        a.insert(1, Scalar::zero());
        match f.substitute(&a, &c) {
            Err(CoeffError::ZeroDenominator { params }) => {
                assert_eq!(params, vec!["r5".to_string()])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn demotes_to_simplest() {
        let p = Scalar::param(0);
        assert_eq!(p.clone() - p.clone(), Scalar::zero());
        let q = p.checked_div(&Scalar::param(0)).unwrap();
        assert_eq!(q, Scalar::one());
        assert!(matches!(Scalar::i() * Scalar::i(), Scalar::Rat(_)));
    }
}
