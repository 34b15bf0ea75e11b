use super::field::Field;
use super::gaussian::GaussianRational;
use super::poly::Polynomial;

/// Polynomials in the declared parameters with Gaussian-rational coefficients.
pub type Poly = Polynomial<GaussianRational>;

/// A reduced fraction of parameter polynomials. The denominator is monic
/// under degrevlex and coprime to the numerator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Build and normalize `num/den`; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::from_poly(Poly::zero()));
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading_coefficient().inv().expect("nonzero");
        num = num.scale(&lc);
        den = den.scale(&lc);
        Some(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone()).expect("nonzero");
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::new(n, &self.den * &o.den).expect("nonzero")
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero")
    }

    pub fn inv(&self) -> Option<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.num.conj(), self.den.conj()).expect("nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn cancels_common_factor() {
        let a = &v(0) + &Poly::one();
        let f = RationalFunction::new(&a * &v(1), &a * &v(2).scale(&GaussianRational::from_i64(3)))
            .unwrap();
        assert_eq!(
            f.numer(),
            &v(1).scale(&GaussianRational::from_rational(&crate::coeff::field::rat(
                1, 3
            )))
        );
        assert_eq!(f.denom(), &v(2));
    }

    #[test]
    fn coprime_stays() {
        let f = RationalFunction::new(v(0), v(1).pow(2)).unwrap();
        assert_eq!(f.numer(), &v(0));
        assert_eq!(f.denom(), &v(1).pow(2));
    }

    #[test]
    fn sum_and_inverse() {
        let a = RationalFunction::new(Poly::one(), v(0)).unwrap();
        let s = a.add(&a.neg());
        assert!(s.is_zero());
        let p = a.mul(&a.inv().unwrap());
        assert_eq!(p, RationalFunction::from_poly(Poly::one()));
        assert!(RationalFunction::new(Poly::one(), Poly::zero()).is_none());
    }
}
