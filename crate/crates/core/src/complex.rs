//! Linear complex structures, (1,0)-coframes and the `∂`/`∂̄` splitting of
//! the complexified Chevalley–Eilenberg differential.

use serde_json::Value;

use crate::coeff::{parse_scalar, Field, ParameterContext, Scalar};
use crate::cohomology::{
    betti_numbers, bigraded_names, build_complex, parametric_betti, Bigraded, CohomologyError,
    CohomologyTable, ParametricTable, Theory,
};
use crate::exterior::{parse_element_with, Blade, ExteriorElement, ExteriorError, LinearMorphism};
use crate::lie::{Coboundary, GradedOperator, LieError, StructureConstants};
use crate::linalg::Matrix;
use crate::parametric::ConditionSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComplexError {
    #[error("a complex structure needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("J∘J ≠ −id: J∘J(e{generator}) = {image}")]
    NotComplex { generator: usize, image: String },
    #[error("expected {expected} generators, got {got}")]
    ChoiceLength { expected: usize, got: usize },
    #[error("generators {0:?} give dependent (1,0)-forms; choose different generators")]
    DependentChoice(Vec<usize>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not integrable: (0,2)-part of d({generator}) is {component}")]
    NotIntegrable {
        generator: String,
        component: String,
    },
    #[error("invalid complex structure document: {0}")]
    Json(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Coeff(#[from] crate::coeff::CoeffError),
}

/// `J ∈ End(𝔤^∨)` with `J² = −id`, acting by `J(e^j) = Σ_i mat[i][j]·e^i`.
#[derive(Clone, Debug)]
pub struct AlmostComplexStructure {
    lift: LinearMorphism,
}

impl AlmostComplexStructure {
    pub fn new(mat: Matrix<Scalar>) -> Result<Self, ComplexError> {
        let lift = LinearMorphism::new(mat)?;
        let n = lift.n();
        if n % 2 == 1 {
            return Err(ComplexError::OddDimension(n));
        }
        for j in 0..n {
            let jj = lift.apply(lift.image_of_generator(j))?;
            if jj != -ExteriorElement::generator(n, j) {
                return Err(ComplexError::NotComplex {
                    generator: j,
                    image: jj.to_string(),
                });
            }
        }
        Ok(AlmostComplexStructure { lift })
    }

    /// `J e^{2j} = e^{2j+1}`.
    pub fn standard(n: usize) -> Result<Self, ComplexError> {
        if n % 2 == 1 {
            return Err(ComplexError::OddDimension(n));
        }
        let mut m = Matrix::zeros(n, n);
        for j in 0..n / 2 {
            m.set(2 * j + 1, 2 * j, Scalar::one());
            m.set(2 * j, 2 * j + 1, Scalar::int(-1));
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.lift.n()
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        self.lift.matrix()
    }

    /// The multiplicative extension to forms of every degree.
    pub fn apply(&self, a: &ExteriorElement) -> Result<ExteriorElement, ComplexError> {
        Ok(self.lift.apply(a)?)
    }
}

/// A basis `φ⁰ … φ^{m−1}` of the `i`-eigenspace of `J` on 1-forms.
#[derive(Clone, Debug)]
pub struct ComplexCoframe {
    pub chosen: Vec<usize>,
    pub phi: Vec<ExteriorElement>,
}

impl ComplexCoframe {
    pub fn m(&self) -> usize {
        self.phi.len()
    }

    pub fn conjugates(&self) -> Vec<ExteriorElement> {
        self.phi.iter().map(|p| p.conjugate()).collect()
    }

    /// Rows: coefficients of `φ⁰ … φ^{m−1}, φ̄⁰ … φ̄^{m−1}` in `e⁰ … e^{n−1}`.
    pub fn change_of_basis(&self) -> Matrix<Scalar> {
        let n = 2 * self.m();
        let forms: Vec<ExteriorElement> =
            self.phi.iter().cloned().chain(self.conjugates()).collect();
        Matrix::from_fn(n, n, |a, i| forms[a].coefficient_of(Blade::generator(i)))
    }
}

fn eigenform(j: &AlmostComplexStructure, c: usize) -> Result<ExteriorElement, ComplexError> {
    let n = j.n();
    let je = j.apply(&ExteriorElement::generator(n, c))?;
    Ok(ExteriorElement::generator(n, c) - je.scale(&Scalar::i()))
}

fn independent(forms: &[ExteriorElement], n: usize) -> bool {
    let rows: Vec<Vec<Scalar>> = forms
        .iter()
        .map(|f| {
            (0..n)
                .map(|i| f.coefficient_of(Blade::generator(i)))
                .collect()
        })
        .collect();
    Matrix::from_rows(rows, n).rank() == forms.len()
}

/// `φʲ = e^{chosen[j]} − i·J(e^{chosen[j]})`; without a choice, the
/// smallest generators giving independent forms are taken.
pub fn coframe_from_j(
    j: &AlmostComplexStructure,
    chosen: Option<&[usize]>,
) -> Result<ComplexCoframe, ComplexError> {
    let n = j.n();
    let m = n / 2;
    let (chosen, phi) = match chosen {
        Some(c) => {
            if c.len() != m {
                return Err(ComplexError::ChoiceLength {
                    expected: m,
                    got: c.len(),
                });
            }
            if let Some(&bad) = c.iter().find(|&&x| x >= n) {
                return Err(ExteriorError::IndexOutOfRange { index: bad, n }.into());
            }
            let phi = c
                .iter()
                .map(|&x| eigenform(j, x))
                .collect::<Result<Vec<_>, _>>()?;
            if !independent(&phi, n) {
                return Err(ComplexError::DependentChoice(c.to_vec()));
            }
            (c.to_vec(), phi)
        }
        None => {
            let (mut chosen, mut phi) = (Vec::new(), Vec::new());
            for x in 0..n {
                if phi.len() == m {
                    break;
                }
                phi.push(eigenform(j, x)?);
                if independent(&phi, n) {
                    chosen.push(x);
                } else {
                    phi.pop();
                }
            }
            (chosen, phi)
        }
    };
    for p in &phi {
        let jp = j.apply(p)?;
        debug_assert_eq!(jp, p.scale(&Scalar::i()));
    }
    Ok(ComplexCoframe { chosen, phi })
}

/// Bidegree of a blade on `φ⁰…φ^{m−1}, φ̄⁰…φ̄^{m−1}`.
pub fn bidegree(m: usize, b: Blade) -> (usize, usize) {
    let low = (1u64 << m) - 1;
    (
        (b.0 & low).count_ones() as usize,
        (b.0 >> m).count_ones() as usize,
    )
}

/// The part of `a` of bidegree `(p, q)`.
pub fn bidegree_part(m: usize, a: &ExteriorElement, p: usize, q: usize) -> ExteriorElement {
    let mut out = ExteriorElement::zero(a.n());
    for (b, c) in a.terms() {
        if bidegree(m, *b) == (p, q) {
            out.add_term(*b, c.clone());
        }
    }
    out
}

/// `d` on the complexified algebra written in the `(φ, φ̄)` basis.
#[derive(Clone, Debug)]
pub struct BigradedStructure {
    m: usize,
    ctx: ParameterContext,
    images: Vec<ExteriorElement>,
}

impl BigradedStructure {
    /// Images `d φ⁰ … d φ̄^{m−1}` on `2m` generators.
    pub fn from_images(
        images: Vec<ExteriorElement>,
        ctx: ParameterContext,
    ) -> Result<Self, ComplexError> {
        let n = images.len();
        if n % 2 == 1 {
            return Err(ComplexError::OddDimension(n));
        }
        for (m, e) in images.iter().enumerate() {
            if e.n() != n {
                return Err(ComplexError::DimensionMismatch {
                    expected: n,
                    got: e.n(),
                });
            }
            if !e.is_zero() && e.pure_degree() != Some(2) {
                return Err(LieError::NotTwoForm(m).into());
            }
        }
        Ok(BigradedStructure {
            m: n / 2,
            ctx,
            images,
        })
    }

    /// Equations for `d φʲ` only; `d φ̄ʲ` is obtained by conjugation,
    /// with parameters taken real.
    pub fn from_holomorphic(
        phi_images: Vec<ExteriorElement>,
        ctx: ParameterContext,
    ) -> Result<Self, ComplexError> {
        let m = phi_images.len();
        let bars: Vec<ExteriorElement> = phi_images.iter().map(|e| conjugate_form(m, e)).collect();
        Self::from_images(phi_images.into_iter().chain(bars).collect(), ctx)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ctx(&self) -> &ParameterContext {
        &self.ctx
    }

    pub fn images(&self) -> &[ExteriorElement] {
        &self.images
    }

    pub fn generator_names(&self) -> Vec<String> {
        bigraded_names(self.m)
    }

    pub fn has_params(&self) -> bool {
        self.images.iter().any(|e| !e.params().is_empty())
    }

    pub fn d(&self) -> Coboundary {
        Coboundary::from_images(self.images.clone())
    }

    pub fn render(&self, a: &ExteriorElement) -> String {
        let names = self.generator_names();
        a.render_with(&|j| names[j].clone(), &self.ctx.namer())
    }

    pub fn render_images(&self) -> Vec<String> {
        self.images.iter().map(|e| self.render(e)).collect()
    }

    /// Holds iff no `d φʲ` has a `(0,2)`-component.
    pub fn integrability_check(&self) -> Result<(), ComplexError> {
        let names = self.generator_names();
        for (img, name) in self.images[..self.m].iter().zip(&names) {
            let c = bidegree_part(self.m, img, 0, 2);
            if !c.is_zero() {
                return Err(ComplexError::NotIntegrable {
                    generator: name.clone(),
                    component: self.render(&c),
                });
            }
        }
        Ok(())
    }

    /// `(∂, ∂̄)` with `∂ + ∂̄ = d`, checked to square to zero and anticommute.
    pub fn split_operators(&self) -> Result<(Coboundary, Coboundary), ComplexError> {
        self.integrability_check()?;
        let m = self.m;
        let mut del = Vec::new();
        let mut delbar = Vec::new();
        for (j, e) in self.images.iter().enumerate() {
            let (p, q) = if j < m { (1, 0) } else { (0, 1) };
            let x = bidegree_part(m, e, p + 1, q);
            let y = bidegree_part(m, e, p, q + 1);
            if &(&x + &y) != e {
                let names = self.generator_names();
                let rest = e - &(&x + &y);
                return Err(ComplexError::NotIntegrable {
                    generator: names[j].clone(),
                    component: self.render(&rest),
                });
            }
            del.push(x);
            delbar.push(y);
        }
        let (del, delbar) = (
            Coboundary::from_images(del),
            Coboundary::from_images(delbar),
        );
        Bigraded {
            m,
            del: &del,
            delbar: &delbar,
        }
        .check_identities()?;
        Ok((del, delbar))
    }

    pub fn cohomology(&self, theory: Theory) -> Result<CohomologyTable, ComplexError> {
        let (del, delbar) = self.split_operators()?;
        let b = Bigraded {
            m: self.m,
            del: &del,
            delbar: &delbar,
        };
        Ok(match theory {
            Theory::Dolbeault => b.dolbeault()?,
            Theory::BottChern => b.bott_chern()?,
            Theory::Aeppli => b.aeppli()?,
            Theory::DeRham | Theory::MorseNovikov => betti_numbers(&build_complex(&self.d())?)?,
        })
    }

    pub fn parametric_cohomology(
        &self,
        theory: Theory,
        base: &ConditionSet,
    ) -> Result<ParametricTable, ComplexError> {
        if matches!(theory, Theory::DeRham | Theory::MorseNovikov) {
            return Ok(parametric_betti(&build_complex(&self.d())?, base)?);
        }
        let (del, delbar) = self.split_operators()?;
        Ok(Bigraded {
            m: self.m,
            del: &del,
            delbar: &delbar,
        }
        .parametric(theory, base)?)
    }

    /// Parse `{"m": 3, "params": ["B"], "d": {"phi1": "phi0^barphi0", …}}`.
    /// Without `barphi` keys the conjugate equations are generated.
    pub fn from_json(v: &Value) -> Result<Self, ComplexError> {
        let bad = |s: &str| ComplexError::Json(s.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        for k in obj.keys() {
            if !["m", "params", "d", "name"].contains(&k.as_str()) {
                return Err(ComplexError::Json(format!("unknown key '{k}'")));
            }
        }
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("'m' must be a nonnegative integer"))? as usize;
        let names: Vec<String> = match obj.get("params") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| bad("params must be strings"))
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(bad("params must be a list")),
        };
        let ctx = ParameterContext::from_names(&names)?;
        let gens = bigraded_names(m);
        let d = obj
            .get("d")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("'d' must be an object"))?;
        let mut images = vec![ExteriorElement::zero(2 * m); 2 * m];
        let mut explicit_bar = false;
        for (k, val) in d {
            let j = gens
                .iter()
                .position(|g| g == k)
                .ok_or_else(|| ComplexError::Json(format!("unknown generator '{k}'")))?;
            explicit_bar |= j >= m;
            let text = val
                .as_str()
                .ok_or_else(|| ComplexError::Json(format!("d['{k}'] must be a string")))?;
            images[j] = parse_element_with(text, &gens, &ctx)?;
        }
        if explicit_bar {
            Self::from_images(images, ctx)
        } else {
            images.truncate(m);
            Self::from_holomorphic(images, ctx)
        }
    }
}

/// Complex conjugation exchanging `φʲ ↔ φ̄ʲ`.
pub fn conjugate_form(m: usize, a: &ExteriorElement) -> ExteriorElement {
    let n = 2 * m;
    let swap = Matrix::from_fn(n, n, |i, j| {
        if (i + m) % n == j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    LinearMorphism::new(swap)
        .expect("square")
        .apply(&a.conjugate())
        .expect("same n")
}

/// Express `d` in the coframe `(φ, φ̄)` determined by `coframe`.
pub fn transport_structure_equations(
    s: &StructureConstants,
    coframe: &ComplexCoframe,
) -> Result<BigradedStructure, ComplexError> {
    let n = s.dim();
    if n != 2 * coframe.m() {
        return Err(ComplexError::DimensionMismatch {
            expected: 2 * coframe.m(),
            got: n,
        });
    }
    let p = coframe.change_of_basis();
    let q = p
        .inverse()
        .ok_or_else(|| ComplexError::DependentChoice(coframe.chosen.clone()))?;
    let back = LinearMorphism::new(q.transpose())?;
    let d = s.coboundary();
    let images = (0..n)
        .map(|a| {
            let mut real = ExteriorElement::zero(n);
            for i in 0..n {
                real = real + d.image_of_generator(i).scale(p.get(a, i));
            }
            back.apply(&real)
        })
        .collect::<Result<Vec<_>, _>>()?;
    BigradedStructure::from_images(images, s.ctx().clone())
}

/// A complex-structure document: either direct equations or a real `J`.
#[derive(Clone, Debug)]
pub enum ComplexStructureInput {
    Direct(BigradedStructure),
    Real {
        j: AlmostComplexStructure,
        chosen: Option<Vec<usize>>,
    },
}

impl ComplexStructureInput {
    /// `{"J": [[…], …], "chosen": [0, 2, 4]}` or the form accepted by
    /// [`BigradedStructure::from_json`].
    pub fn from_json(v: &Value, ctx: &ParameterContext) -> Result<Self, ComplexError> {
        let Some(jv) = v.get("J") else {
            return Ok(Self::Direct(BigradedStructure::from_json(v)?));
        };
        let bad = |s: &str| ComplexError::Json(s.to_string());
        let rows = jv
            .as_array()
            .ok_or_else(|| bad("'J' must be a list of rows"))?;
        let n = rows.len();
        let mut mat = Matrix::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            let r = r
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| bad("'J' must be square"))?;
            for (j, x) in r.iter().enumerate() {
                let c = match x {
                    Value::String(s) => parse_scalar(s, ctx)?,
                    Value::Number(k) => parse_scalar(&k.to_string(), ctx)?,
                    _ => return Err(bad("matrix entries must be numbers or strings")),
                };
                mat.set(i, j, c);
            }
        }
        let chosen = match v.get("chosen") {
            None => None,
            Some(c) => Some(
                c.as_array()
                    .ok_or_else(|| bad("'chosen' must be a list"))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|k| k as usize)
                            .ok_or_else(|| bad("'chosen' entries must be indices"))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(Self::Real {
            j: AlmostComplexStructure::new(mat)?,
            chosen,
        })
    }

    /// The bigraded structure for `s`.
    pub fn resolve(&self, s: &StructureConstants) -> Result<BigradedStructure, ComplexError> {
        match self {
            Self::Direct(b) => {
                if 2 * b.m() != s.dim() {
                    return Err(ComplexError::DimensionMismatch {
                        expected: s.dim(),
                        got: 2 * b.m(),
                    });
                }
                Ok(b.clone())
            }
            Self::Real { j, chosen } => {
                if j.n() != s.dim() {
                    return Err(ComplexError::DimensionMismatch {
                        expected: s.dim(),
                        got: j.n(),
                    });
                }
                transport_structure_equations(s, &coframe_from_j(j, chosen.as_deref())?)
            }
        }
    }
}

impl GradedOperator for BigradedStructure {
    fn generators(&self) -> usize {
        2 * self.m
    }

    fn apply(&self, a: &ExteriorElement) -> ExteriorElement {
        self.d().apply(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::parse_salamon;

    fn h8() -> StructureConstants {
        let ctx = ParameterContext::new();
        crate::lie::parse_sage_dict(
            "{(2,3):-E.gens()[0]}",
            &crate::lie::default_generators(6),
            &ctx,
        )
        .unwrap()
    }

    fn phi(b: &BigradedStructure, t: &str) -> ExteriorElement {
        parse_element_with(t, &b.generator_names(), b.ctx()).unwrap()
    }

    #[test]
    fn standard_coframe() {
        let j = AlmostComplexStructure::standard(6).unwrap();
        let c = coframe_from_j(&j, Some(&[0, 2, 4])).unwrap();
        let ctx = ParameterContext::new();
        let r: Vec<String> = c.phi.iter().map(|p| p.render(&ctx)).collect();
        assert_eq!(r, ["e0 - i*e1", "e2 - i*e3", "e4 - i*e5"]);
        for b in c.conjugates() {
            assert_eq!(j.apply(&b).unwrap(), b.scale(&-Scalar::i()));
        }
        assert_eq!(coframe_from_j(&j, None).unwrap().chosen, vec![0, 2, 4]);
        assert!(matches!(
            coframe_from_j(&j, Some(&[0, 1, 2])),
            Err(ComplexError::DependentChoice(_))
        ));
        assert!(AlmostComplexStructure::new(Matrix::identity(2)).is_err());
    }

    #[test]
    fn h8_transport() {
        let j = AlmostComplexStructure::standard(6).unwrap();
        let b =
            transport_structure_equations(&h8(), &coframe_from_j(&j, Some(&[0, 2, 4])).unwrap())
                .unwrap();
        let expect = phi(&b, "I/2*phi1^barphi1");
        assert_eq!(b.images()[0], expect);
        assert_eq!(b.images()[3], expect);
        assert!(b
            .images()
            .iter()
            .enumerate()
            .all(|(k, e)| k == 0 || k == 3 || e.is_zero()));
        let (del, delbar) = b.split_operators().unwrap();
        assert_eq!(delbar.image_of_generator(0), &expect);
        assert_eq!(del.image_of_generator(3), &expect);
        assert!(delbar.image_of_generator(3).is_zero());
        assert_eq!(
            b.cohomology(Theory::BottChern).unwrap().totals(),
            vec![1, 4, 10, 16, 14, 6, 1]
        );
        assert_eq!(
            b.cohomology(Theory::Aeppli).unwrap().totals(),
            vec![1, 6, 14, 16, 10, 4, 1]
        );
        assert_eq!(
            b.cohomology(Theory::Dolbeault).unwrap().totals(),
            vec![1, 5, 11, 14, 11, 5, 1]
        );
    }

    #[test]
    fn integrability() {
        let ctx = ParameterContext::new();
        let gens = bigraded_names(2);
        let bad = parse_element_with("barphi0^barphi1", &gens, &ctx).unwrap();
        let b =
            BigradedStructure::from_holomorphic(vec![bad, ExteriorElement::zero(4)], ctx).unwrap();
        match b.integrability_check() {
            Err(ComplexError::NotIntegrable {
                generator,
                component,
            }) => {
                assert_eq!(generator, "phi0");
                assert_eq!(component, "barphi0^barphi1");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conjugation_swaps_bars() {
        let ctx = ParameterContext::from_names(&["B"]).unwrap();
        let gens = bigraded_names(3);
        let a = parse_element_with("I*phi0^barphi1 + B*phi2", &gens, &ctx).unwrap();
        assert_eq!(
            conjugate_form(3, &a),
            parse_element_with("I*phi1^barphi0 + B*barphi2", &gens, &ctx).unwrap()
        );
    }

    #[test]
    fn json_direct_input() {
        let v = serde_json::json!({"m": 3, "params": ["B"], "d": {"phi1": "phi0^barphi0", "phi2": "phi0^phi1 + B*phi0^barphi1 + (B-1)*phi1^barphi0"}});
        let b = BigradedStructure::from_json(&v).unwrap();
        assert_eq!(b.render(&b.images()[4]), "-phi0^barphi0");
        assert!(b.has_params());
        b.split_operators().unwrap();
        assert!(
            BigradedStructure::from_json(&serde_json::json!({"m": 1, "d": {"psi": "0"}})).is_err()
        );
        let abelian = parse_salamon("(0,0,0,0)", 4).unwrap();
        let input = ComplexStructureInput::from_json(
            &serde_json::json!({"J": [[0,-1,0,0],[1,0,0,0],[0,0,0,-1],[0,0,1,0]]}),
            abelian.ctx(),
        )
        .unwrap();
        assert!(input
            .resolve(&abelian)
            .unwrap()
            .images()
            .iter()
            .all(ExteriorElement::is_zero));
    }
}
