//! Cohomology dimensions by exact rank computations on the blade-basis
//! matrices of a differential.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coeff::{Field, Polynomial, Rational, Scalar};
use crate::exterior::{basis, BasisIndex, Blade, ExteriorElement};
use crate::lie::{GradedOperator, LieError, StructureConstants};
use crate::linalg::Matrix;
use crate::parametric::{rank_strata, ConditionSet, ParamError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("operator does not square to zero: d∘d ≠ 0 from degree {degree}")]
    NotDifferential { degree: usize },
    #[error("{identity} fails: {witness}")]
    IdentityFails {
        identity: &'static str,
        witness: String,
    },
    #[error("coefficients depend on parameters; use the parametric computation")]
    Parametric,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Matrix of `op` from the span of `source` into the span of `target`
/// (rows indexed by `target`).
pub fn operator_matrix(
    op: &dyn GradedOperator,
    source: &[Blade],
    target: &BasisIndex,
) -> Matrix<Scalar> {
    let n = op.generators();
    let mut m = Matrix::zeros(target.len(), source.len());
    for (j, b) in source.iter().enumerate() {
        let y = op.apply(&ExteriorElement::blade(n, *b, Scalar::one()));
        for (t, c) in y.terms() {
            let i = target.position(*t).expect("image lies in the target span");
            m.set(i, j, c.clone());
        }
    }
    m
}

/// The matrices `∧ʲ → ∧ʲ⁺¹` of a differential in the lexicographic blade bases.
#[derive(Clone, Debug)]
pub struct ChainComplexMatrices {
    n: usize,
    mats: Vec<Matrix<Scalar>>,
}

impl ChainComplexMatrices {
    pub fn generators(&self) -> usize {
        self.n
    }

    /// The matrix out of degree `j`, for `0 ≤ j ≤ n`.
    pub fn matrix(&self, j: usize) -> &Matrix<Scalar> {
        &self.mats[j]
    }

    pub fn matrices(&self) -> &[Matrix<Scalar>] {
        &self.mats
    }

    /// Dimension of degree `j`.
    pub fn dim(&self, j: usize) -> usize {
        self.mats[j].cols()
    }

    pub fn has_params(&self) -> bool {
        self.mats
            .iter()
            .any(|m| m.entries().any(|c| !c.is_constant()))
    }
}

/// Assemble the matrices of `op` in every degree and check `d∘d = 0`.
pub fn build_complex(op: &dyn GradedOperator) -> Result<ChainComplexMatrices, CohomologyError> {
    let n = op.generators();
    let idx: Vec<BasisIndex> = (0..=n + 1).map(|k| BasisIndex::new(n, k)).collect();
    let mats: Vec<Matrix<Scalar>> = (0..=n)
        .into_par_iter()
        .map(|j| operator_matrix(op, &idx[j].blades, &idx[j + 1]))
        .collect();
    for j in 0..n {
        if !mats[j + 1].mul(&mats[j]).is_zero() {
            return Err(CohomologyError::NotDifferential { degree: j });
        }
    }
    Ok(ChainComplexMatrices { n, mats })
}

/// Exact rank over ℚ or ℚ(i); parameters are rejected.
pub fn exact_rank(m: &Matrix<Scalar>) -> Result<usize, CohomologyError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    if let Some(r) = m.try_map(|c| c.to_rational()) {
        return Ok(r.rank_bareiss());
    }
    match m.try_map(|c| c.to_gaussian()) {
        Some(g) => Ok(g.rank()),
        None => Err(CohomologyError::Parametric),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theory {
    DeRham,
    MorseNovikov,
    Dolbeault,
    BottChern,
    Aeppli,
}

impl Theory {
    pub fn label(self) -> &'static str {
        match self {
            Theory::DeRham => "deRham",
            Theory::MorseNovikov => "MorseNovikov",
            Theory::Dolbeault => "Dolbeault",
            Theory::BottChern => "BottChern",
            Theory::Aeppli => "Aeppli",
        }
    }
}

/// Cohomology dimensions per degree, with the bidegree split when bigraded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub theory: Theory,
    pub dims: BTreeMap<usize, usize>,
    pub bigraded: Option<BTreeMap<(usize, usize), usize>>,
}

impl CohomologyTable {
    pub fn totals(&self) -> Vec<usize> {
        self.dims.values().copied().collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(k, v)| if k % 2 == 0 { *v as i64 } else { -(*v as i64) })
            .sum()
    }

    /// `Σ dims[k]·x^k`.
    pub fn poincare_polynomial(&self) -> Polynomial<Rational> {
        let mut p = Polynomial::zero();
        for (k, v) in &self.dims {
            p.add_term(
                crate::coeff::Monomial::var_pow(0, *k as u32),
                Rational::from_i64(*v as i64),
            );
        }
        p
    }

    pub fn render_poincare(&self) -> String {
        self.poincare_polynomial().fmt_with(&|_| "x".to_string())
    }

    pub fn to_json(&self) -> Value {
        let dims: serde_json::Map<String, Value> = self
            .dims
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        let mut v = json!({ "theory": self.theory.label(), "dims": dims });
        if let Some(b) = &self.bigraded {
            let bi: serde_json::Map<String, Value> = b
                .iter()
                .map(|((p, q), d)| (format!("{p},{q}"), json!(d)))
                .collect();
            v["bidegrees"] = Value::Object(bi);
        }
        v
    }
}

impl fmt::Display for CohomologyTable {
    /// `{0: 1, 1: 5, …}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `dim − Σ rank(mats[i])` for each cell.
#[derive(Clone, Debug)]
struct Cell {
    degree: usize,
    bidegree: Option<(usize, usize)>,
    dim: usize,
    minus: Vec<usize>,
}

/// The rank computations a cohomology table needs, and how to combine them.
struct Plan {
    theory: Theory,
    mats: Vec<Matrix<Scalar>>,
    cells: Vec<Cell>,
}

impl Plan {
    fn assemble(&self, ranks: &[usize]) -> CohomologyTable {
        let mut dims = BTreeMap::new();
        let mut bi = BTreeMap::new();
        for c in &self.cells {
            let v = c.dim - c.minus.iter().map(|&i| ranks[i]).sum::<usize>();
            *dims.entry(c.degree).or_insert(0) += v;
            if let Some(pq) = c.bidegree {
                bi.insert(pq, v);
            }
        }
        let bigraded = if self.cells.iter().any(|c| c.bidegree.is_some()) {
            Some(bi)
        } else {
            None
        };
        CohomologyTable {
            theory: self.theory,
            dims,
            bigraded,
        }
    }

    fn exact(&self) -> Result<CohomologyTable, CohomologyError> {
        let ranks: Vec<usize> = self
            .mats
            .par_iter()
            .map(exact_rank)
            .collect::<Result<_, _>>()?;
        Ok(self.assemble(&ranks))
    }

    fn generic(&self) -> CohomologyTable {
        let ranks: Vec<usize> = self.mats.par_iter().map(|m| m.rank()).collect();
        self.assemble(&ranks)
    }

    fn parametric(&self, base: &ConditionSet) -> Result<ParametricTable, CohomologyError> {
        let strata = stratify(&self.mats, base)?;
        Ok(ParametricTable {
            strata: strata
                .into_iter()
                .map(|(c, r)| (c, self.assemble(&r)))
                .collect(),
        })
    }
}

fn chain_plan(theory: Theory, c: &ChainComplexMatrices) -> Plan {
    let n = c.n;
    let cells = (0..=n)
        .map(|j| {
            let mut minus = vec![j];
            if j > 0 {
                minus.push(j - 1);
            }
            Cell {
                degree: j,
                bidegree: None,
                dim: c.dim(j),
                minus,
            }
        })
        .collect();
    Plan {
        theory,
        mats: c.mats.clone(),
        cells,
    }
}

/// Cohomology of a constant-coefficient complex.
pub fn betti_numbers(c: &ChainComplexMatrices) -> Result<CohomologyTable, CohomologyError> {
    chain_plan(Theory::DeRham, c).exact()
}

/// De Rham cohomology of the Lie algebra.
pub fn de_rham(s: &StructureConstants) -> Result<CohomologyTable, CohomologyError> {
    s.ensure_jacobi()?;
    betti_numbers(&build_complex(&s.coboundary())?)
}

/// Cohomology of `d_θ = d − θ∧`.
pub fn morse_novikov(
    s: &StructureConstants,
    theta: &ExteriorElement,
) -> Result<CohomologyTable, CohomologyError> {
    s.ensure_jacobi()?;
    let op = s.twisted(theta.clone())?;
    chain_plan(Theory::MorseNovikov, &build_complex(&op)?).exact()
}

/// Cohomology over the field of rational functions in the parameters.
pub fn generic_betti(c: &ChainComplexMatrices) -> CohomologyTable {
    chain_plan(Theory::DeRham, c).generic()
}

/// Degree-`j` classes: kernel vectors of `d_j` independent modulo the image of `d_{j−1}`.
pub fn representatives(c: &ChainComplexMatrices, j: usize) -> Vec<ExteriorElement> {
    let n = c.n;
    let blades = basis(n, j);
    let mut span: Vec<Vec<Scalar>> = if j > 0 {
        let prev = &c.mats[j - 1];
        (0..prev.cols())
            .map(|k| prev.column(k))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect()
    } else {
        Vec::new()
    };
    let mut rank = if span.is_empty() {
        0
    } else {
        Matrix::from_rows(span.clone(), blades.len()).rank()
    };
    let mut out = Vec::new();
    for v in c.mats[j].kernel() {
        span.push(v.clone());
        let r = Matrix::from_rows(span.clone(), blades.len()).rank();
        if r > rank {
            rank = r;
            let mut e = ExteriorElement::zero(n);
            for (b, x) in blades.iter().zip(v) {
                e.add_term(*b, x);
            }
            out.push(e);
        } else {
            span.pop();
        }
    }
    out
}

/// Tables on the strata of a case split on the parameters.
#[derive(Clone, Debug)]
pub struct ParametricTable {
    pub strata: Vec<(ConditionSet, CohomologyTable)>,
}

impl ParametricTable {
    /// The table on the stratum with no equations.
    pub fn generic(&self) -> Option<&CohomologyTable> {
        self.strata
            .iter()
            .find(|(c, _)| c.equations().is_empty())
            .map(|(_, t)| t)
    }

    pub fn to_json(&self, ctx: &crate::coeff::ParameterContext) -> Value {
        Value::Array(
            self.strata
                .iter()
                .map(|(c, t)| json!({ "conditions": c.to_json(ctx), "table": t.to_json() }))
                .collect(),
        )
    }
}

/// A disjoint cover of `base` on which every matrix has constant rank.
fn stratify(
    mats: &[Matrix<Scalar>],
    base: &ConditionSet,
) -> Result<Vec<(ConditionSet, Vec<usize>)>, CohomologyError> {
    let firsts: Vec<(ConditionSet, usize)> = mats
        .par_iter()
        .map(|m| rank_strata(m, base).map(|v| v.into_iter().next().expect("at least one stratum")))
        .collect::<Result<_, _>>()?;
    let mut forks = Vec::new();
    for (c, _) in &firsts {
        for p in c.inequations() {
            if !base.inequations().contains(p) && !forks.contains(p) {
                forks.push(p.clone());
            }
        }
    }
    let mut generic = base.clone();
    for p in &forks {
        generic.add_inequation(p);
    }
    let mut out = vec![(
        generic.simplified().map_err(ParamError::from)?,
        firsts.iter().map(|(_, r)| *r).collect(),
    )];
    for (i, f) in forks.iter().enumerate() {
        let mut s = base.clone().with_equation(f);
        for g in &forks[..i] {
            s.add_inequation(g);
        }
        if s.is_consistent().map_err(ParamError::from)? {
            out.extend(stratify(mats, &s)?);
        }
    }
    Ok(out)
}

/// De Rham-type cohomology of a parameter-dependent complex, per stratum.
pub fn parametric_betti(
    c: &ChainComplexMatrices,
    base: &ConditionSet,
) -> Result<ParametricTable, CohomologyError> {
    chain_plan(Theory::DeRham, c).parametric(base)
}

/// `∂` and `∂̄` on the complexified algebra with generators `φ⁰…φ^{m−1}, φ̄⁰…φ̄^{m−1}`.
pub struct Bigraded<'a> {
    pub m: usize,
    pub del: &'a dyn GradedOperator,
    pub delbar: &'a dyn GradedOperator,
}

/// Blades of bidegree `(p, q)` in lexicographic order.
pub fn bigraded_basis(m: usize, p: usize, q: usize) -> Vec<Blade> {
    let low = (1u64 << m) - 1;
    basis(2 * m, p + q)
        .into_iter()
        .filter(|b| (b.0 & low).count_ones() as usize == p && (b.0 >> m).count_ones() as usize == q)
        .collect()
}

impl Bigraded<'_> {
    fn block(&self, p: usize, q: usize) -> Vec<Blade> {
        bigraded_basis(self.m, p, q)
    }

    fn mat(
        &self,
        op: &dyn GradedOperator,
        from: (usize, usize),
        to: (usize, usize),
    ) -> Matrix<Scalar> {
        operator_matrix(
            op,
            &self.block(from.0, from.1),
            &BasisIndex::from_blades(self.block(to.0, to.1)),
        )
    }

    /// `∂² = ∂̄² = ∂∂̄ + ∂̄∂ = 0` on every blade.
    pub fn check_identities(&self) -> Result<(), CohomologyError> {
        let n = 2 * self.m;
        for k in 0..=n {
            for b in basis(n, k) {
                let x = ExteriorElement::blade(n, b, Scalar::one());
                let (dx, bx) = (self.del.apply(&x), self.delbar.apply(&x));
                for (name, y) in [
                    ("∂∘∂ = 0", self.del.apply(&dx)),
                    ("∂̄∘∂̄ = 0", self.delbar.apply(&bx)),
                    (
                        "∂∘∂̄ + ∂̄∘∂ = 0",
                        &self.del.apply(&bx) + &self.delbar.apply(&dx),
                    ),
                ] {
                    if !y.is_zero() {
                        let names = bigraded_names(self.m);
                        let ctx = crate::coeff::ParameterContext::new();
                        let g = |j: usize| names[j].clone();
                        let p = ctx.namer();
                        return Err(CohomologyError::IdentityFails {
                            identity: name,
                            witness: format!(
                                "{} ↦ {}",
                                x.render_with(&g, &p),
                                y.render_with(&g, &p)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn plan(&self, theory: Theory) -> Plan {
        let m = self.m;
        let mut mats = Vec::new();
        let mut cells = Vec::new();
        let push = |mats: &mut Vec<Matrix<Scalar>>, x: Matrix<Scalar>| {
            mats.push(x);
            mats.len() - 1
        };
        for p in 0..=m {
            for q in 0..=m {
                let dim = self.block(p, q).len();
                let mut minus = Vec::new();
                match theory {
                    Theory::Dolbeault => {
                        if q < m {
                            minus.push(push(&mut mats, self.mat(self.delbar, (p, q), (p, q + 1))));
                        }
                        if q > 0 {
                            minus.push(push(&mut mats, self.mat(self.delbar, (p, q - 1), (p, q))));
                        }
                    }
                    Theory::BottChern => {
                        let src = (p, q);
                        let a = if p < m {
                            Some(self.mat(self.del, src, (p + 1, q)))
                        } else {
                            None
                        };
                        let b = if q < m {
                            Some(self.mat(self.delbar, src, (p, q + 1)))
                        } else {
                            None
                        };
                        let stacked = match (a, b) {
                            (Some(a), Some(b)) => Some(a.vstack(&b)),
                            (x, y) => x.or(y),
                        };
                        if let Some(s) = stacked {
                            minus.push(push(&mut mats, s));
                        }
                        if p > 0 && q > 0 {
                            let inner = self.mat(self.delbar, (p - 1, q - 1), (p - 1, q));
                            let outer = self.mat(self.del, (p - 1, q), (p, q));
                            minus.push(push(&mut mats, outer.mul(&inner)));
                        }
                    }
                    Theory::Aeppli => {
                        if p < m && q < m {
                            let inner = self.mat(self.delbar, (p, q), (p, q + 1));
                            let outer = self.mat(self.del, (p, q + 1), (p + 1, q + 1));
                            minus.push(push(&mut mats, outer.mul(&inner)));
                        }
                        let a = if p > 0 {
                            Some(self.mat(self.del, (p - 1, q), (p, q)))
                        } else {
                            None
                        };
                        let b = if q > 0 {
                            Some(self.mat(self.delbar, (p, q - 1), (p, q)))
                        } else {
                            None
                        };
                        let joined = match (a, b) {
                            (Some(a), Some(b)) => Some(a.hstack(&b)),
                            (x, y) => x.or(y),
                        };
                        if let Some(s) = joined {
                            minus.push(push(&mut mats, s));
                        }
                    }
                    _ => unreachable!("not a bigraded theory"),
                }
                cells.push(Cell {
                    degree: p + q,
                    bidegree: Some((p, q)),
                    dim,
                    minus,
                });
            }
        }
        Plan {
            theory,
            mats,
            cells,
        }
    }

    pub fn dolbeault(&self) -> Result<CohomologyTable, CohomologyError> {
        self.check_identities()?;
        self.plan(Theory::Dolbeault).exact()
    }

    pub fn bott_chern(&self) -> Result<CohomologyTable, CohomologyError> {
        self.check_identities()?;
        self.plan(Theory::BottChern).exact()
    }

    pub fn aeppli(&self) -> Result<CohomologyTable, CohomologyError> {
        self.check_identities()?;
        self.plan(Theory::Aeppli).exact()
    }

    /// Any of the three theories on the strata of a case split.
    pub fn parametric(
        &self,
        theory: Theory,
        base: &ConditionSet,
    ) -> Result<ParametricTable, CohomologyError> {
        self.check_identities()?;
        self.plan(theory).parametric(base)
    }
}

/// `phi0 … phi{m−1}, barphi0 … barphi{m−1}`.
pub fn bigraded_names(m: usize) -> Vec<String> {
    (0..m)
        .map(|j| format!("phi{j}"))
        .chain((0..m).map(|j| format!("barphi{j}")))
        .collect()
}
