use crate::coeff::ParameterContext;
use crate::exterior::{basis, Blade, ExteriorElement};

use super::LieError;

/// A linear operator of degree +1 on the exterior algebra.
pub trait GradedOperator: Sync {
    fn generators(&self) -> usize;
    fn apply(&self, a: &ExteriorElement) -> ExteriorElement;
}

/// An odd antiderivation determined by its values on generators, extended
/// by `D(a∧b) = D(a)∧b + (-1)^{|a|} a∧D(b)` and `D(1) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coboundary {
    images: Vec<ExteriorElement>,
}

impl Coboundary {
    pub fn from_images(images: Vec<ExteriorElement>) -> Self {
        let n = images.len();
        assert!(
            images.iter().all(|e| e.n() == n),
            "images must live on the same algebra"
        );
        Coboundary { images }
    }

    pub fn zero(n: usize) -> Self {
        Coboundary {
            images: (0..n).map(|_| ExteriorElement::zero(n)).collect(),
        }
    }

    pub fn image_of_generator(&self, j: usize) -> &ExteriorElement {
        &self.images[j]
    }

    pub fn images(&self) -> &[ExteriorElement] {
        &self.images
    }

    fn apply_blade(&self, b: Blade) -> ExteriorElement {
        let n = self.images.len();
        let ix = b.indices();
        let mut out = ExteriorElement::zero(n);
        for (t, &j) in ix.iter().enumerate() {
            let img = &self.images[j];
            if img.is_zero() {
                continue;
            }
            let left = Blade::from_indices(&ix[..t]).expect("distinct");
            let right = Blade::from_indices(&ix[t + 1..]).expect("distinct");
            for (mb, c) in img.terms() {
                let Some(s1) = Blade::wedge_sign(left, *mb) else {
                    continue;
                };
                let lm = Blade(left.0 | mb.0);
                let Some(s2) = Blade::wedge_sign(lm, right) else {
                    continue;
                };
                let sign = s1 * s2 * if t % 2 == 0 { 1 } else { -1 };
                out.add_term(
                    Blade(lm.0 | right.0),
                    if sign < 0 { -c.clone() } else { c.clone() },
                );
            }
        }
        out
    }

    /// `D² = 0` on every blade of every degree, or the first failure.
    pub fn square_zero_witness(&self) -> Option<(Blade, ExteriorElement)> {
        let n = self.images.len();
        for k in 1..n {
            for b in basis(n, k) {
                let dd = self.apply(&self.apply_blade(b));
                if !dd.is_zero() {
                    return Some((b, dd));
                }
            }
        }
        None
    }
}

impl GradedOperator for Coboundary {
    fn generators(&self) -> usize {
        self.images.len()
    }

    fn apply(&self, a: &ExteriorElement) -> ExteriorElement {
        assert_eq!(a.n(), self.images.len(), "generator count mismatch");
        let mut out = ExteriorElement::zero(a.n());
        for (b, c) in a.terms() {
            if *b == Blade::ONE {
                continue;
            }
            out = out + self.apply_blade(*b).scale(c);
        }
        out
    }
}

/// `d_θ(a) = d(a) − θ∧a` for a closed 1-form `θ`.
#[derive(Clone, Debug)]
pub struct TwistedCoboundary {
    base: Coboundary,
    theta: ExteriorElement,
}

impl TwistedCoboundary {
    pub fn new(base: Coboundary, theta: ExteriorElement) -> Result<Self, LieError> {
        let n = base.generators();
        if theta.n() != n {
            return Err(LieError::Exterior(
                crate::exterior::ExteriorError::DimensionMismatch(n, theta.n()),
            ));
        }
        if !theta.is_zero() && theta.pure_degree() != Some(1) {
            return Err(LieError::ThetaNotDegreeOne);
        }
        let dt = base.apply(&theta);
        if !dt.is_zero() {
            return Err(LieError::ThetaNotClosed(
                dt.render(&ParameterContext::new()),
            ));
        }
        Ok(TwistedCoboundary { base, theta })
    }

    pub fn theta(&self) -> &ExteriorElement {
        &self.theta
    }

    pub fn base(&self) -> &Coboundary {
        &self.base
    }
}

impl GradedOperator for TwistedCoboundary {
    fn generators(&self) -> usize {
        self.base.generators()
    }

    fn apply(&self, a: &ExteriorElement) -> ExteriorElement {
        &self.base.apply(a) - &(&self.theta * a)
    }
}

/// A failed identity: the operator input and its nonzero output.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub input: ExteriorElement,
    pub output: ExteriorElement,
}

impl Witness {
    pub fn render(&self, op: &str, ctx: &ParameterContext) -> String {
        format!(
            "{op}({}) = {}",
            self.input.render(ctx),
            self.output.render(ctx)
        )
    }
}

/// Outcome of a structural check.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn ok() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails(input: ExteriorElement, output: ExteriorElement) -> Self {
        Verdict {
            holds: false,
            witness: Some(Witness { input, output }),
        }
    }
}
