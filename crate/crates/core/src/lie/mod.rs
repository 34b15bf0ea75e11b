//! Lie algebras in the dual picture: structure constants `d e^m = Σ c^m_{jk} e^j∧e^k`.

mod coboundary;
mod json;
mod sage;
mod salamon;

pub use coboundary::{Coboundary, GradedOperator, TwistedCoboundary, Verdict, Witness};
pub use sage::{default_generators, parse_sage_dict};
pub use salamon::{parse_salamon, parse_salamon_auto};

use std::collections::BTreeMap;

use crate::coeff::{CoeffError, Field, ParameterContext, Scalar};
use crate::exterior::{basis, Blade, ExteriorElement, ExteriorError};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("Salamon notation, position {pos}: {msg}")]
    Salamon { pos: usize, msg: String },
    #[error("structure document: {0}")]
    Json(String),
    #[error("dictionary notation, position {pos}: {msg}")]
    Dict { pos: usize, msg: String },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pair ({0},{0}) has a repeated index")]
    RepeatedPair(usize),
    #[error("d e^{0} must be a 2-form")]
    NotTwoForm(usize),
    #[error("theta must be a 1-form")]
    ThetaNotDegreeOne,
    #[error("theta is not closed: d(theta) = {0}")]
    ThetaNotClosed(String),
    #[error("Jacobi identity fails: {0}")]
    NotJacobi(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Structure equations of an `n`-dimensional Lie algebra: the images
/// `d e^m` of the dual generators, each a 2-form.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    n: usize,
    ctx: ParameterContext,
    images: Vec<ExteriorElement>,
}

impl StructureConstants {
    /// The abelian algebra of dimension `n`.
    pub fn abelian(n: usize, ctx: ParameterContext) -> Self {
        StructureConstants {
            n,
            ctx,
            images: (0..n).map(|_| ExteriorElement::zero(n)).collect(),
        }
    }

    pub fn from_images(
        images: Vec<ExteriorElement>,
        ctx: ParameterContext,
    ) -> Result<Self, LieError> {
        let n = images.len();
        for (m, e) in images.iter().enumerate() {
            if e.n() != n {
                return Err(ExteriorError::DimensionMismatch(n, e.n()).into());
            }
            if !e.is_zero() && e.pure_degree() != Some(2) {
                return Err(LieError::NotTwoForm(m));
            }
        }
        Ok(StructureConstants { n, ctx, images })
    }

    /// Add `c·e^j∧e^k` to `d e^m`; `j > k` is accepted with a sign flip.
    pub fn add(&mut self, m: usize, j: usize, k: usize, c: Scalar) -> Result<(), LieError> {
        for i in [m, j, k] {
            if i >= self.n {
                return Err(LieError::IndexOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
        }
        if j == k {
            return Err(LieError::RepeatedPair(j));
        }
        let (a, b, c) = if j < k { (j, k, c) } else { (k, j, -c) };
        self.images[m].add_term(Blade((1 << a) | (1 << b)), c);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> &ParameterContext {
        &self.ctx
    }

    pub fn image(&self, m: usize) -> &ExteriorElement {
        &self.images[m]
    }

    pub fn images(&self) -> &[ExteriorElement] {
        &self.images
    }

    /// Nonzero constants as `(m, j, k, c)` with `j < k`, sorted.
    pub fn coefficients(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (m, e) in self.images.iter().enumerate() {
            let mut t: Vec<_> = e
                .terms()
                .map(|(b, c)| {
                    let ix = b.indices();
                    (m, ix[0], ix[1], c.clone())
                })
                .collect();
            t.sort_by_key(|x| (x.1, x.2));
            out.extend(t);
        }
        out
    }

    pub fn coefficient(&self, m: usize, j: usize, k: usize) -> Scalar {
        let (a, b, s) = if j < k { (j, k, false) } else { (k, j, true) };
        let c = self.images[m].coefficient_of(Blade((1 << a) | (1 << b)));
        if s {
            -c
        } else {
            c
        }
    }

    pub fn has_params(&self) -> bool {
        self.images.iter().any(|e| !e.params().is_empty())
    }

    /// True when every constant is rational.
    pub fn is_rational(&self) -> bool {
        self.images
            .iter()
            .all(|e| e.terms().all(|(_, c)| c.is_rational()))
    }

    pub fn coboundary(&self) -> Coboundary {
        Coboundary::from_images(self.images.clone())
    }

    pub fn twisted(&self, theta: ExteriorElement) -> Result<TwistedCoboundary, LieError> {
        TwistedCoboundary::new(self.coboundary(), theta)
    }

    /// `d(d e^m) = 0` for every generator; the witness is the first `e^m` with `d²e^m ≠ 0`.
    pub fn jacobi_check(&self) -> Verdict {
        let d = self.coboundary();
        for (m, img) in self.images.iter().enumerate() {
            let dd = d.apply(img);
            if !dd.is_zero() {
                return Verdict::fails(ExteriorElement::generator(self.n, m), dd);
            }
        }
        Verdict::ok()
    }

    /// Error unless the Jacobi identity holds.
    pub fn ensure_jacobi(&self) -> Result<(), LieError> {
        let v = self.jacobi_check();
        match v.witness {
            None => Ok(()),
            Some(w) => Err(LieError::NotJacobi(w.render("d∘d", &self.ctx))),
        }
    }

    /// `d` vanishes on degree `n−1`; the witness is the first blade with nonzero image.
    pub fn unimodularity_check(&self) -> Verdict {
        if self.n == 0 {
            return Verdict::ok();
        }
        let d = self.coboundary();
        for b in basis(self.n, self.n - 1) {
            let x = ExteriorElement::blade(self.n, b, Scalar::one());
            let y = d.apply(&x);
            if !y.is_zero() {
                return Verdict::fails(x, y);
            }
        }
        Verdict::ok()
    }

    /// Brackets `[e_j, e_k] = −Σ_m c^m_{jk} e_m`, as columns of a matrix per pair.
    fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|m| {
                let mut acc = Scalar::zero();
                for (b, c) in self.images[m].terms() {
                    let ix = b.indices();
                    let (j, k) = (ix[0], ix[1]);
                    let t = x[j].clone() * &y[k] - x[k].clone() * &y[j];
                    if !t.is_zero() {
                        acc = acc - c.clone() * &t;
                    }
                }
                acc
            })
            .collect()
    }

    /// Terms of the lower central series vanish eventually.
    pub fn is_nilpotent(&self) -> bool {
        let unit = |j: usize| -> Vec<Scalar> {
            (0..self.n)
                .map(|i| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        };
        let mut current: Vec<Vec<Scalar>> = (0..self.n).map(unit).collect();
        let mut dim = self.n;
        loop {
            let mut spans = Vec::new();
            for j in 0..self.n {
                for v in &current {
                    let b = self.bracket(&unit(j), v);
                    if b.iter().any(|c| !c.is_zero()) {
                        spans.push(b);
                    }
                }
            }
            if spans.is_empty() {
                return true;
            }
            let (r, pivots) = Matrix::from_rows(spans, self.n).rref();
            let next: Vec<Vec<Scalar>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
            if next.len() >= dim {
                return false;
            }
            dim = next.len();
            current = next;
        }
    }

    /// Substitute parameter values throughout.
    pub fn substitute(&self, assignment: &BTreeMap<usize, Scalar>) -> Result<Self, LieError> {
        let images = self
            .images
            .iter()
            .map(|e| e.substitute(assignment, &self.ctx))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StructureConstants {
            n: self.n,
            ctx: self.ctx.clone(),
            images,
        })
    }

    /// Salamon notation, if every constant is an integer and `n ≤ 9`.
    pub fn render_salamon(&self) -> Option<String> {
        if self.n > 9 {
            return None;
        }
        let mut entries = Vec::new();
        for e in &self.images {
            let mut t: Vec<(Vec<usize>, &Scalar)> =
                e.terms().map(|(b, c)| (b.indices(), c)).collect();
            t.sort_by(|a, b| a.0.cmp(&b.0));
            if t.is_empty() {
                entries.push("0".to_string());
                continue;
            }
            let mut s = String::new();
            for (k, (ix, c)) in t.into_iter().enumerate() {
                let r = c.to_rational()?;
                if !r.is_integer() {
                    return None;
                }
                let neg = r < num_traits::Zero::zero();
                let mag = if neg { -r.clone() } else { r.clone() };
                if neg {
                    s.push('-');
                } else if k > 0 {
                    s.push('+');
                }
                if !Field::is_one(&mag) {
                    s.push_str(&format!("{}*", mag));
                }
                s.push_str(&format!("{}{}", ix[0] + 1, ix[1] + 1));
            }
            entries.push(s);
        }
        Some(format!("({})", entries.join(",")))
    }

    /// Display `[d e^0, …, d e^{n-1}]` as a list, as the structure equations print.
    pub fn render_images(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|e| e.render(&self.ctx)).collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::to_json(self)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, LieError> {
        json::from_json(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: &str, n: usize) -> StructureConstants {
        parse_salamon(s, n).unwrap()
    }

    #[test]
    fn r4_equations_and_checks() {
        let r4 = alg("(14+24,24+34,34,0)", 4);
        let ctx = ParameterContext::new();
        assert_eq!(
            r4.render_images(),
            "[e0^e3 + e1^e3, e1^e3 + e2^e3, e2^e3, 0]"
        );
        assert!(r4.jacobi_check().holds);
        let u = r4.unimodularity_check();
        assert!(!u.holds);
        assert_eq!(
            u.witness.unwrap().render("d", &ctx),
            "d(e0^e1^e2) = 3*e0^e1^e2^e3"
        );
        let d = r4.coboundary();
        let imgs: Vec<String> = basis(4, 3)
            .into_iter()
            .map(|b| {
                d.apply(&ExteriorElement::blade(4, b, Scalar::one()))
                    .render(&ctx)
            })
            .collect();
        assert_eq!(imgs, vec!["3*e0^e1^e2^e3", "0", "0", "0"]);
        assert!(!r4.is_nilpotent());
    }

    #[test]
    fn non_jacobi_has_witness() {
        let mut s = StructureConstants::abelian(4, ParameterContext::new());
        s.add(0, 1, 2, Scalar::one()).unwrap();
        s.add(1, 0, 3, Scalar::one()).unwrap();
        let v = s.jacobi_check();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.input, ExteriorElement::generator(4, 0));
        assert!(!w.output.is_zero());
        assert!(s.ensure_jacobi().is_err());
    }

    #[test]
    fn twisted_requires_closed_degree_one() {
        let r4 = alg("(14+24,24+34,34,0)", 4);
        let ctx = ParameterContext::new();
        let theta = crate::exterior::parse_element("-2*e3", 4, &ctx).unwrap();
        let dt = r4.twisted(theta).unwrap();
        let x = crate::exterior::parse_element("e0^e3", 4, &ctx).unwrap();
        assert!(dt.apply(&x).is_zero());
        assert!(matches!(
            r4.twisted(ExteriorElement::generator(4, 0)),
            Err(LieError::ThetaNotClosed(_))
        ));
        let two = crate::exterior::parse_element("e0^e3", 4, &ctx).unwrap();
        assert_eq!(r4.twisted(two).unwrap_err(), LieError::ThetaNotDegreeOne);
        let zero = r4.twisted(ExteriorElement::zero(4)).unwrap();
        assert_eq!(zero.apply(&x), r4.coboundary().apply(&x));
    }

    #[test]
    fn leibniz_on_products() {
        let s = alg("(0,0,0,12,13,14+23)", 6);
        let d = s.coboundary();
        let a = ExteriorElement::generator(6, 5);
        let b = &ExteriorElement::generator(6, 4) * &ExteriorElement::generator(6, 1);
        let lhs = d.apply(&(&a * &b));
        let rhs = &(&d.apply(&a) * &b) - &(&a * &d.apply(&b));
        assert_eq!(lhs, rhs);
        assert!(d.square_zero_witness().is_none());
        assert!(s.is_nilpotent());
        assert!(d.apply(&ExteriorElement::one(6)).is_zero());
    }

    #[test]
    fn salamon_render_round_trip() {
        let s = alg("(0,0,0,12,-2*13,14+23)", 6);
        assert_eq!(s.render_salamon().unwrap(), "(0,0,0,12,-2*13,14+23)");
        assert_eq!(parse_salamon(&s.render_salamon().unwrap(), 6).unwrap(), s);
    }
}
