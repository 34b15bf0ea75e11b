//! Locally conformally symplectic structures: Lee forms, twisted-closed
//! nondegenerate 2-forms, normalization by automorphisms and equivalence
//! through automorphism ideals.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::coeff::{Field, ParameterContext, Poly, Polynomial, Scalar};
use crate::cohomology::operator_matrix;
use crate::exterior::{basis, BasisIndex, Blade, ExteriorElement, ExteriorError, LinearMorphism};
use crate::groebner::{self, GroebnerError, MonomialOrder, DEFAULT_PAIR_BUDGET};
use crate::lie::{GradedOperator, LieError, StructureConstants};
use crate::linalg::Matrix;
use crate::parametric::{
    parametric_solve_linear, reduce_scalar, Branch, CaseSplitSolution, ConditionSet, ParamError,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LcsError {
    #[error("lcs structures need an even dimension, got {0}")]
    OddDimension(usize),
    #[error("not an automorphism: d(Φe{generator}) − Φ(de{generator}) has coefficient {coefficient} on {blade}")]
    NotAutomorphism {
        generator: usize,
        blade: String,
        coefficient: String,
    },
    #[error("matrix is not invertible under the family's conditions: {0} may vanish")]
    Singular(String),
    #[error("parameter name '{0}' clashes with a morphism unknown")]
    NameClash(String),
    #[error("the family context must extend the algebra's parameter context")]
    ContextMismatch,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Coeff(#[from] crate::coeff::CoeffError),
}

fn form_from_values(n: usize, blades: &[Blade], values: &[Scalar]) -> ExteriorElement {
    let mut e = ExteriorElement::zero(n);
    for (b, v) in blades.iter().zip(values) {
        e.add_term(*b, v.clone());
    }
    e
}

fn unknown_names(prefix: &str, blades: &[Blade]) -> Vec<String> {
    blades
        .iter()
        .map(|b| {
            let ix: String = b.indices().iter().map(|i| i.to_string()).collect();
            format!("{prefix}{ix}")
        })
        .collect()
}

/// The generic closed 1-form `θ = Σ θ_j e^j` per branch.
#[derive(Clone, Debug)]
pub struct ClosedOneForms {
    pub solution: CaseSplitSolution,
    pub forms: Vec<(ConditionSet, ExteriorElement)>,
}

/// Solve `dθ = 0` for a generic 1-form.
pub fn closed_one_forms(s: &StructureConstants) -> Result<ClosedOneForms, LcsError> {
    s.ensure_jacobi()?;
    let n = s.dim();
    let gens = basis(n, 1);
    let a = operator_matrix(&s.coboundary(), &gens, &BasisIndex::new(n, 2));
    let zero = vec![Scalar::zero(); a.rows()];
    let solution = parametric_solve_linear(
        &a,
        &zero,
        &unknown_names("theta", &gens),
        s.ctx(),
        &ConditionSet::new(),
    )?;
    let forms = solution
        .branches
        .iter()
        .map(|b| (b.conditions.clone(), form_from_values(n, &gens, &b.values)))
        .collect();
    Ok(ClosedOneForms { solution, forms })
}

/// Top coefficient of `Ω^{n/2}` on `e⁰∧…∧e^{n−1}`.
pub fn volume_coefficient(omega: &ExteriorElement) -> Scalar {
    let n = omega.n();
    let mut p = ExteriorElement::one(n);
    for _ in 0..n / 2 {
        p = &p * omega;
    }
    p.coefficient_of(Blade((1u64 << n) - 1))
}

/// A family of solutions of `dθ = 0`, `dΩ = θ∧Ω` on a stratum.
#[derive(Clone, Debug)]
pub struct LcsFamily {
    pub theta: ExteriorElement,
    pub omega: ExteriorElement,
    pub conditions: ConditionSet,
    /// Raw top coefficient of `Ω^{n/2}`, shown in the nondegeneracy condition.
    pub volume: Scalar,
    pub degenerate: bool,
    pub symplectic: bool,
}

impl LcsFamily {
    pub fn render_condition(&self, ctx: &ParameterContext) -> String {
        format!("{} != 0", self.volume.render(ctx))
    }

    pub fn to_json(&self, ctx: &ParameterContext) -> Value {
        json!({
            "theta": self.theta.render(ctx),
            "omega": self.omega.render(ctx),
            "conditions": self.conditions.to_json(ctx),
            "nondegeneracy": self.render_condition(ctx),
            "degenerate": self.degenerate,
            "symplectic": self.symplectic,
        })
    }
}

/// All families together with the context naming their free parameters.
#[derive(Clone, Debug)]
pub struct LcsClassification {
    pub ctx: ParameterContext,
    pub lee_forms: ClosedOneForms,
    pub families: Vec<LcsFamily>,
}

impl LcsClassification {
    pub fn nondegenerate(&self) -> impl Iterator<Item = &LcsFamily> {
        self.families.iter().filter(|f| !f.degenerate)
    }

    pub fn to_json(&self) -> Value {
        let lee: Vec<Value> = self
            .lee_forms
            .forms
            .iter()
            .map(|(c, t)| json!({ "conditions": c.to_json(&self.lee_forms.solution.ctx), "theta": t.render(&self.lee_forms.solution.ctx) }))
            .collect();
        let fams: Vec<Value> = self.families.iter().map(|f| f.to_json(&self.ctx)).collect();
        json!({ "lee_forms": lee, "families": fams })
    }
}

/// Express a variable through the others for each equation of the form
/// `c·v + rest` with `c` constant and `v` absent from `rest`.
fn linear_substitutions(gb: &[Poly]) -> BTreeMap<usize, Scalar> {
    let mut out = BTreeMap::new();
    for p in gb {
        for v in p.vars().into_iter().rev() {
            if p.degree_in(v) != 1 || out.contains_key(&v) {
                continue;
            }
            let parts = p.coeffs_in(v);
            let Some(c) = parts.get(&1).and_then(|c| c.as_constant()) else {
                continue;
            };
            let rest = parts.get(&0).cloned().unwrap_or_else(Polynomial::zero);
            let inv = c.inv().expect("nonzero leading part");
            out.insert(v, Scalar::from_poly(-rest.scale(&inv)));
            break;
        }
    }
    out
}

fn specialize(
    e: &ExteriorElement,
    conds: &ConditionSet,
    ctx: &ParameterContext,
) -> Result<ExteriorElement, LcsError> {
    let gb = conds.basis()?;
    let subs = linear_substitutions(&gb);
    let e = if subs.is_empty() {
        e.clone()
    } else {
        e.substitute(&subs, ctx)?
    };
    Ok(e.map_coeffs(|c| reduce_scalar(c, &gb)))
}

fn twisted_solutions(
    s: &StructureConstants,
    theta: &ExteriorElement,
    ctx: &ParameterContext,
    base: &ConditionSet,
    symplectic: bool,
) -> Result<(ParameterContext, Vec<LcsFamily>), LcsError> {
    let n = s.dim();
    let two = basis(n, 2);
    let op = s.twisted(theta.clone())?;
    let a = operator_matrix(&op, &two, &BasisIndex::new(n, 3));
    let zero = vec![Scalar::zero(); a.rows()];
    let sol = parametric_solve_linear(&a, &zero, &unknown_names("omega", &two), ctx, base)?;
    let mut fams = Vec::new();
    for b in &sol.branches {
        fams.push(family(theta, &two, b, &sol.ctx, symplectic)?);
    }
    Ok((sol.ctx, fams))
}

fn family(
    theta: &ExteriorElement,
    two: &[Blade],
    b: &Branch,
    ctx: &ParameterContext,
    symplectic: bool,
) -> Result<LcsFamily, LcsError> {
    let n = theta.n();
    let theta = specialize(theta, &b.conditions, ctx)?;
    let omega = specialize(&form_from_values(n, two, &b.values), &b.conditions, ctx)?;
    let volume = volume_coefficient(&omega);
    let mut conditions = b.conditions.clone();
    let degenerate = volume.is_zero() || {
        let num = volume.to_frac().numer().clone();
        !conditions.clone().with_inequation(&num).is_consistent()?
    };
    if !degenerate {
        conditions.add_inequation(volume.to_frac().numer());
    }
    Ok(LcsFamily {
        theta,
        omega,
        conditions,
        volume,
        degenerate,
        symplectic,
    })
}

/// Every Lee-form branch with `θ ≠ 0`, solved for `d_θΩ = 0` and checked for
/// nondegeneracy, followed by the symplectic case `θ = 0`.
pub fn lcs_families(s: &StructureConstants) -> Result<LcsClassification, LcsError> {
    let n = s.dim();
    if n % 2 == 1 {
        return Err(LcsError::OddDimension(n));
    }
    let lee = closed_one_forms(s)?;
    let mut ctx = lee.solution.ctx.clone();
    let mut families = Vec::new();
    for (conds, theta) in &lee.forms {
        let nums: Vec<Poly> = theta
            .terms()
            .map(|(_, c)| c.to_frac().numer().clone())
            .collect();
        let mut base = conds.clone();
        base.add_inequation(
            &nums
                .iter()
                .fold(Poly::zero(), |acc, p| acc + p.clone() * p.conj()),
        );
        if !base.is_consistent()? {
            continue;
        }
        let (c, f) = twisted_solutions(s, theta, &ctx, &base, false)?;
        ctx = c;
        families.extend(f);
    }
    let (c, f) = twisted_solutions(
        s,
        &ExteriorElement::zero(n),
        &ctx,
        &ConditionSet::new(),
        true,
    )?;
    ctx = c;
    families.extend(f);
    Ok(LcsClassification {
        ctx,
        lee_forms: lee,
        families,
    })
}

/// Checks `d∘Φ = Φ∘d` on generators, reducing modulo the equations of `conds`.
pub fn check_automorphism(
    s: &StructureConstants,
    phi: &LinearMorphism,
    conds: &ConditionSet,
    ctx: &ParameterContext,
) -> Result<(), LcsError> {
    let n = s.dim();
    let gb = conds.basis()?;
    let d = s.coboundary();
    for j in 0..n {
        let lhs = d.apply(phi.image_of_generator(j));
        let rhs = phi.apply(d.image_of_generator(j))?;
        let diff = (&lhs - &rhs).map_coeffs(|c| reduce_scalar(c, &gb));
        if let Some((b, c)) = diff.sorted_terms().first() {
            return Err(LcsError::NotAutomorphism {
                generator: j,
                blade: b.render(&|k| format!("e{k}")),
                coefficient: c.render(ctx),
            });
        }
    }
    Ok(())
}

/// Transport `(θ, Ω)` by the automorphism with matrix `mat` (column convention).
pub fn apply_normalization(
    s: &StructureConstants,
    f: &LcsFamily,
    mat: &Matrix<Scalar>,
    ctx: &ParameterContext,
) -> Result<LcsFamily, LcsError> {
    let phi = LinearMorphism::for_algebra(s.dim(), mat.clone())?;
    check_automorphism(s, &phi, &f.conditions, ctx)?;
    let mut must_vanish_nowhere = vec![mat.determinant()];
    must_vanish_nowhere.extend(
        mat.entries()
            .map(|c| Scalar::from_poly(c.to_frac().denom().clone())),
    );
    for x in must_vanish_nowhere {
        let num = x.to_frac().numer().clone();
        if f.conditions.clone().with_equation(&num).is_consistent()? {
            return Err(LcsError::Singular(x.render(ctx)));
        }
    }
    let theta = phi.apply(&f.theta)?;
    let omega = phi.apply(&f.omega)?;
    let volume = volume_coefficient(&omega);
    Ok(LcsFamily {
        theta,
        omega,
        volume,
        conditions: f.conditions.clone(),
        degenerate: f.degenerate,
        symplectic: f.symplectic,
    })
}

/// Is `Ω₁` carried to `Ω₂` by an automorphism fixing `θ`?
#[derive(Clone, Debug)]
pub struct EquivalenceProblem {
    pub algebra: StructureConstants,
    pub theta: ExteriorElement,
    pub omega1: ExteriorElement,
    pub omega2: ExteriorElement,
    /// Context of the family parameters in `theta`, `omega1`, `omega2`.
    pub ctx: ParameterContext,
}

/// Generators in `ℚ[a₀₀, …, a_{n−1,n−1}, family parameters]`.
#[derive(Clone, Debug)]
pub struct AutomorphismIdeal {
    pub ring: ParameterContext,
    pub generators: Vec<Poly>,
    pub unknowns: usize,
}

impl AutomorphismIdeal {
    pub fn render_generators(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|p| p.fmt_with(&self.ring.namer()))
            .collect()
    }

    pub fn nonzero(&self) -> Vec<Poly> {
        self.generators
            .iter()
            .filter(|p| !p.is_zero())
            .cloned()
            .collect()
    }

    pub fn reduced_basis(&self, order: &MonomialOrder) -> Result<Vec<Poly>, LcsError> {
        Ok(groebner::groebner_basis(
            &self.nonzero(),
            order,
            DEFAULT_PAIR_BUDGET,
        )?)
    }
}

fn coefficient_polys(e: &ExteriorElement, blades: &[Blade]) -> Vec<Poly> {
    blades
        .iter()
        .map(|b| {
            let c = e.coefficient_of(*b);
            c.to_frac().numer().clone()
        })
        .collect()
}

impl EquivalenceProblem {
    /// Morphism conditions `d(Ψe^b) − Ψ(de^b)` (generator outer, 2-blade
    /// inner), then `Ψθ − θ`, then `ΨΩ₁ − Ω₂`.
    pub fn automorphism_ideal(&self) -> Result<AutomorphismIdeal, LcsError> {
        let n = self.algebra.dim();
        let mut ring = ParameterContext::new();
        for j in 0..n {
            for k in 0..n {
                ring.declare(&format!("a{j}{k}"))?;
            }
        }
        let mut remap = BTreeMap::new();
        for (i, name) in self.ctx.names().iter().enumerate() {
            if ring.index_of(name).is_some() {
                return Err(LcsError::NameClash(name.clone()));
            }
            remap.insert(i, Scalar::param(ring.declare(name)?.index));
        }
        let lift = |e: &ExteriorElement| -> Result<ExteriorElement, LcsError> {
            Ok(if remap.is_empty() {
                e.clone()
            } else {
                e.substitute(&remap, &self.ctx)?
            })
        };
        let algebra_names = self.algebra.ctx().names();
        if self.ctx.names().get(..algebra_names.len()) != Some(algebra_names) {
            return Err(LcsError::ContextMismatch);
        }
        let d = if self.algebra.has_params() {
            self.algebra.substitute(&remap)?.coboundary()
        } else {
            self.algebra.coboundary()
        };
        let mat = Matrix::from_fn(n, n, |j, k| Scalar::param(j * n + k));
        let psi = LinearMorphism::new(mat)?;
        let two = basis(n, 2);
        let mut gens = Vec::new();
        for b in 0..n {
            let diff = d.apply(psi.image_of_generator(b))
                - psi.apply(&d.apply(&ExteriorElement::generator(n, b)))?;
            gens.extend(coefficient_polys(&diff, &two));
        }
        let theta = lift(&self.theta)?;
        gens.extend(coefficient_polys(
            &(psi.apply(&theta)? - theta),
            &basis(n, 1),
        ));
        let (o1, o2) = (lift(&self.omega1)?, lift(&self.omega2)?);
        gens.extend(coefficient_polys(&(psi.apply(&o1)? - o2), &two));
        Ok(AutomorphismIdeal {
            ring,
            generators: gens,
            unknowns: n * n,
        })
    }

    pub fn are_equivalent(&self) -> Result<EquivalenceVerdict, LcsError> {
        let ideal = self.automorphism_ideal()?;
        let order = MonomialOrder::degrevlex();
        let basis = ideal.reduced_basis(&order)?;
        let witness = basis
            .iter()
            .find(|p| !p.is_zero() && p.vars().iter().all(|&v| v >= ideal.unknowns))
            .cloned();
        Ok(match witness {
            Some(w) => EquivalenceVerdict::Inequivalent {
                witness: w,
                basis,
                ring: ideal.ring,
            },
            None => EquivalenceVerdict::Undecided {
                basis,
                ring: ideal.ring,
            },
        })
    }
}

/// Verdict of [`EquivalenceProblem::are_equivalent`]: a parameter-only
/// polynomial in the ideal shows the forms are equivalent only where it vanishes.
#[derive(Clone, Debug)]
pub enum EquivalenceVerdict {
    Inequivalent {
        witness: Poly,
        basis: Vec<Poly>,
        ring: ParameterContext,
    },
    Undecided {
        basis: Vec<Poly>,
        ring: ParameterContext,
    },
}

impl EquivalenceVerdict {
    pub fn basis(&self) -> &[Poly] {
        match self {
            Self::Inequivalent { basis, .. } | Self::Undecided { basis, .. } => basis,
        }
    }

    pub fn ring(&self) -> &ParameterContext {
        match self {
            Self::Inequivalent { ring, .. } | Self::Undecided { ring, .. } => ring,
        }
    }

    pub fn render_basis(&self) -> String {
        groebner::render_basis(
            self.basis(),
            &MonomialOrder::degrevlex(),
            &self.ring().namer(),
        )
    }

    pub fn to_json(&self) -> Value {
        let namer = self.ring().namer();
        let basis: Vec<String> = self.basis().iter().map(|p| p.fmt_with(&namer)).collect();
        match self {
            Self::Inequivalent { witness, .. } => {
                json!({ "verdict": "inequivalent", "witness": witness.fmt_with(&namer), "basis": basis })
            }
            Self::Undecided { .. } => json!({ "verdict": "undecided", "basis": basis }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::parse_scalar;
    use crate::exterior::parse_element;
    use crate::lie::parse_salamon;

    fn r4() -> StructureConstants {
        parse_salamon("(14+24,24+34,34,0)", 4).unwrap()
    }

    #[test]
    fn lee_forms_of_r4() {
        let c = closed_one_forms(&r4()).unwrap();
        assert_eq!(c.forms.len(), 1);
        assert_eq!(c.forms[0].1.render(&c.solution.ctx), "r1*e3");
        assert_eq!(
            c.solution.render_branch(&c.solution.branches[0]),
            "{theta0: 0, theta1: 0, theta2: 0, theta3: r1}"
        );
        let ab = closed_one_forms(&parse_salamon("(0,0,0,0)", 4).unwrap()).unwrap();
        assert_eq!(ab.solution.branches[0].free.len(), 4);
    }

    #[test]
    fn r4_families_and_normalization() {
        let s = r4();
        let cl = lcs_families(&s).unwrap();
        let ctx = &cl.ctx;
        let lcs: Vec<&LcsFamily> = cl.families.iter().filter(|f| !f.symplectic).collect();
        assert_eq!(lcs.len(), 2);
        assert!(lcs[0].degenerate);
        let f = lcs[1];
        assert!(!f.degenerate);
        assert_eq!(f.theta.render(ctx), "-2*e3");
        assert_eq!(
            f.omega.render(ctx),
            "r5*e0^e3 + r4*e1^e2 + r3*e1^e3 + r2*e2^e3"
        );
        assert_eq!(f.render_condition(ctx), "2*r4*r5 != 0");
        let m = Matrix::from_fn(4, 4, |i, j| {
            let t = [
                ["1/r5", "0", "0", "0"],
                ["0", "1/r5", "0", "0"],
                ["0", "0", "1/r5", "0"],
                ["0", "r2/r4", "-r3/r4", "1"],
            ];
            parse_scalar(t[i][j], ctx).unwrap()
        });
        let g = apply_normalization(&s, f, &m, ctx).unwrap();
        assert_eq!(g.theta.render(ctx), "-2*e3");
        assert_eq!(g.omega.render(ctx), "e0^e3 + r4/r5^2*e1^e2");
        let same = apply_normalization(&s, f, &Matrix::identity(4), ctx).unwrap();
        assert_eq!(same.omega, f.omega);
        let mut bad = Matrix::identity(4);
        bad.set(0, 3, Scalar::one());
        assert!(matches!(
            apply_normalization(&s, f, &bad, ctx),
            Err(LcsError::NotAutomorphism { .. })
        ));
    }

    #[test]
    fn r4_automorphism_ideal() {
        let ctx = ParameterContext::from_names(&["sigma1", "sigma2"]).unwrap();
        let p = EquivalenceProblem {
            algebra: r4(),
            theta: parse_element("-2*e3", 4, &ctx).unwrap(),
            omega1: parse_element("e0^e3 + sigma1*e1^e2", 4, &ctx).unwrap(),
            omega2: parse_element("e0^e3 + sigma2*e1^e2", 4, &ctx).unwrap(),
            ctx,
        };
        let ideal = p.automorphism_ideal().unwrap();
        let g = ideal.render_generators();
        assert_eq!(g.len(), 34);
        assert_eq!(g[0], "a03*a10 + a03*a11 - a00*a13 - a01*a13");
        assert_eq!(&g[21..24], ["0", "a03 + a13", "a13 + a23"]);
        match p.are_equivalent().unwrap() {
            EquivalenceVerdict::Inequivalent { witness, ring, .. } => {
                assert_eq!(witness.fmt_with(&ring.namer()), "sigma1 - sigma2")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identical_forms_are_undecided() {
        let ctx = ParameterContext::from_names(&["s"]).unwrap();
        let o = parse_element("e0^e3 + s*e1^e2", 4, &ctx).unwrap();
        let p = EquivalenceProblem {
            algebra: r4(),
            theta: parse_element("-2*e3", 4, &ctx).unwrap(),
            omega1: o.clone(),
            omega2: o,
            ctx,
        };
        assert!(matches!(
            p.are_equivalent().unwrap(),
            EquivalenceVerdict::Undecided { .. }
        ));
    }
}
