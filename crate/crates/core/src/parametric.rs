//! Linear algebra over coefficients with parameters: rank stratification and
//! linear solving with case splits on pivots.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coeff::{CoeffError, Field, GaussianRational, ParameterContext, Poly, Rational, Scalar};
use crate::exterior::{ExteriorElement, ExteriorError};
use crate::groebner::{self, GroebnerError, MonomialOrder, DEFAULT_PAIR_BUDGET};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("right-hand side has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Canonical representative up to a nonzero constant: rational polynomials become
/// primitive integer polynomials with positive leading coefficient, others monic.
pub fn normalize_poly(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let rats: Option<Vec<Rational>> = p.terms().map(|(_, c)| c.to_rational()).collect();
    let Some(rats) = rats else { return p.monic() };
    let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let num = rats.iter().fold(BigInt::zero(), |acc, r| {
        acc.gcd(&(r.numer() * &den / r.denom()))
    });
    let mut scale = Rational::new(den, num);
    if p.leading_coefficient().re.is_negative() {
        scale = -scale;
    }
    p.scale(&GaussianRational::real(scale))
}

/// An opaque real sign condition `poly > 0` or `poly < 0`, shown by its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCondition {
    pub poly: Poly,
    pub positive: bool,
    pub label: String,
}

/// A conjunction of polynomial equations, inequations and sign conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionSet {
    equations: Vec<Poly>,
    inequations: Vec<Poly>,
    signs: Vec<SignCondition>,
}

impl ConditionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn inequations(&self) -> &[Poly] {
        &self.inequations
    }

    pub fn signs(&self) -> &[SignCondition] {
        &self.signs
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty() && self.inequations.is_empty() && self.signs.is_empty()
    }

    /// Record `p = 0` by its squarefree part.
    pub fn add_equation(&mut self, p: &Poly) {
        let q = normalize_poly(&p.squarefree_part());
        if !q.is_zero() && !self.equations.contains(&q) {
            self.equations.push(q);
        }
    }

    /// Record `p ≠ 0` by its squarefree part.
    pub fn add_inequation(&mut self, p: &Poly) {
        if p.is_zero() {
            self.inequations.push(Poly::zero());
            return;
        }
        if p.is_constant() {
            return;
        }
        let q = normalize_poly(&p.squarefree_part());
        if !self.inequations.contains(&q) {
            self.inequations.push(q);
        }
    }

    pub fn add_sign(&mut self, poly: Poly, positive: bool, label: impl Into<String>) {
        let s = SignCondition {
            poly,
            positive,
            label: label.into(),
        };
        if !self.signs.contains(&s) {
            self.signs.push(s);
        }
    }

    pub fn with_equation(mut self, p: &Poly) -> Self {
        self.add_equation(p);
        self
    }

    pub fn with_inequation(mut self, p: &Poly) -> Self {
        self.add_inequation(p);
        self
    }

    /// Conjunction of two sets.
    pub fn and(&self, other: &ConditionSet) -> ConditionSet {
        let mut out = self.clone();
        for e in &other.equations {
            out.add_equation(e);
        }
        for n in &other.inequations {
            if n.is_zero() {
                out.inequations.push(Poly::zero());
            } else {
                out.add_inequation(n);
            }
        }
        for s in &other.signs {
            out.add_sign(s.poly.clone(), s.positive, s.label.clone());
        }
        out
    }

    /// Contradictions visible without elimination: a constant equation, a zero
    /// inequation, or an inequation equal to an equation.
    pub fn is_trivially_inconsistent(&self) -> bool {
        self.equations.iter().any(|e| e.is_constant())
            || self
                .inequations
                .iter()
                .any(|n| n.is_zero() || self.equations.contains(n))
    }

    /// Solvable over the algebraic closure (sign conditions are not examined).
    pub fn is_consistent(&self) -> Result<bool, GroebnerError> {
        if self.is_trivially_inconsistent() {
            return Ok(false);
        }
        groebner::is_consistent(&self.equations, &self.inequations, DEFAULT_PAIR_BUDGET)
    }

    /// Reduced Gröbner basis of the equations.
    pub fn basis(&self) -> Result<Vec<Poly>, GroebnerError> {
        groebner::groebner_basis(
            &self.equations,
            &MonomialOrder::degrevlex(),
            DEFAULT_PAIR_BUDGET,
        )
    }

    /// Drop inequations that reduce to nonzero constants modulo the equations.
    pub fn simplified(&self) -> Result<ConditionSet, GroebnerError> {
        let gb = self.basis()?;
        let o = MonomialOrder::degrevlex();
        let mut out = ConditionSet {
            equations: gb.clone(),
            inequations: Vec::new(),
            signs: self.signs.clone(),
        };
        out.equations = out.equations.iter().map(normalize_poly).collect();
        for n in &self.inequations {
            let r = groebner::normal_form(n, &gb, &o);
            if r.is_constant() && !r.is_zero() {
                continue;
            }
            out.add_inequation(&r);
        }
        Ok(out)
    }

    /// Truth value at a point of real parameter values.
    pub fn satisfied_at(&self, point: &BTreeMap<usize, Rational>) -> bool {
        let ev = |p: &Poly| -> GaussianRational {
            p.evaluate(
                |c| c.clone(),
                |i| {
                    GaussianRational::real(
                        point
                            .get(&i)
                            .cloned()
                            .unwrap_or_else(<Rational as Zero>::zero),
                    )
                },
            )
        };
        self.equations.iter().all(|e| ev(e).is_zero())
            && self.inequations.iter().all(|n| !ev(n).is_zero())
            && self.signs.iter().all(|s| {
                let v = ev(&s.poly).re;
                if s.positive {
                    v.is_positive()
                } else {
                    v.is_negative()
                }
            })
    }

    pub fn render(&self, ctx: &ParameterContext) -> String {
        let names = ctx.namer();
        let mut parts: Vec<String> = self
            .equations
            .iter()
            .map(|e| format!("{} == 0", e.fmt_with(&names)))
            .collect();
        parts.extend(
            self.inequations
                .iter()
                .map(|n| format!("{} != 0", n.fmt_with(&names))),
        );
        parts.extend(self.signs.iter().map(|s| s.label.clone()));
        format!("[{}]", parts.join(", "))
    }

    pub fn to_json(&self, ctx: &ParameterContext) -> Value {
        let names = ctx.namer();
        let eq: Vec<String> = self.equations.iter().map(|e| e.fmt_with(&names)).collect();
        let neq: Vec<String> = self
            .inequations
            .iter()
            .map(|n| n.fmt_with(&names))
            .collect();
        let mut v = json!({ "eq": eq, "neq": neq });
        if !self.signs.is_empty() {
            v["sign"] = json!(self
                .signs
                .iter()
                .map(|s| s.label.clone())
                .collect::<Vec<_>>());
        }
        v
    }
}

/// Sum of `m·conj(m)` over the given values; parameters are real.
fn norm_sum(values: &[Poly]) -> Poly {
    values
        .iter()
        .fold(Poly::zero(), |acc, m| acc + m.clone() * m.conj())
}

fn poly_entries(m: &Matrix<Scalar>) -> Vec<Vec<Poly>> {
    let den = m.entries().fold(Poly::one(), |acc, s| {
        let d = s.to_frac().denom().clone();
        let g = Poly::gcd(&acc, &d);
        (acc * d).div_exact(&g).expect("gcd divides")
    });
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let f = m.get(i, j).to_frac();
                    (f.numer().clone() * den.clone())
                        .div_exact(f.denom())
                        .expect("common denominator")
                })
                .collect()
        })
        .collect()
}

fn minors(m: &[Vec<Poly>], cols: usize, k: usize) -> Vec<Poly> {
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                go(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        go(0, n, k, &mut cur, &mut out);
        out
    }
    let mut out = Vec::new();
    for rows in choose(m.len(), k) {
        for cs in choose(cols, k) {
            out.push(det_poly(m, &rows, &cs));
        }
    }
    out
}

/// Laplace expansion along the first row.
fn det_poly(m: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Poly {
    if rows.is_empty() {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for (t, &c) in cols.iter().enumerate() {
        let e = &m[rows[0]][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = det_poly(m, &rows[1..], &rest) * e.clone();
        acc = if t % 2 == 0 { acc + sub } else { acc - sub };
    }
    acc
}

/// For each rank `r`, the conditions under which it is attained; an empty list
/// means the rank is impossible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankStratification {
    pub strata: BTreeMap<usize, Vec<ConditionSet>>,
}

impl RankStratification {
    /// The rank when it does not depend on the parameters.
    pub fn unconditional(&self) -> Option<usize> {
        let live: Vec<_> = self.strata.iter().filter(|(_, v)| !v.is_empty()).collect();
        match live[..] {
            [(r, v)] if v.iter().any(ConditionSet::is_empty) => Some(*r),
            _ => None,
        }
    }

    pub fn render(&self, ctx: &ParameterContext) -> String {
        if let Some(r) = self.unconditional() {
            return r.to_string();
        }
        let parts: Vec<String> = self
            .strata
            .iter()
            .map(|(r, v)| {
                if v.is_empty() {
                    format!("{r}: impossible")
                } else {
                    let cs: Vec<String> = v.iter().map(|c| c.render(ctx)).collect();
                    format!("{r}: [{}]", cs.join(", "))
                }
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Rank `r` holds exactly when some `r×r` minor is nonzero and every
/// `(r+1)×(r+1)` minor vanishes.
pub fn parametric_rank(m: &Matrix<Scalar>) -> Result<RankStratification, ParamError> {
    let pm = poly_entries(m);
    let top = m.rows().min(m.cols());
    let mut all: Vec<Vec<Poly>> = (0..=top + 1)
        .map(|k| {
            if k <= top {
                minors(&pm, m.cols(), k)
            } else {
                Vec::new()
            }
        })
        .collect();
    for v in &mut all {
        v.retain(|p| !p.is_zero());
    }
    let mut strata = BTreeMap::new();
    for r in 0..=top {
        let mut cs = ConditionSet::new();
        for e in &all[r + 1] {
            cs.add_equation(e);
        }
        cs.add_inequation(&norm_sum(&all[r]));
        let list = if cs.is_consistent()? {
            vec![cs.simplified()?]
        } else {
            Vec::new()
        };
        strata.insert(r, list);
    }
    Ok(RankStratification { strata })
}

/// Rank over the field of rational functions in the parameters.
pub fn generic_rank(m: &Matrix<Scalar>) -> usize {
    m.rank()
}

/// Reduce numerator and denominator modulo a Gröbner basis of the equations.
pub fn reduce_scalar(s: &Scalar, gb: &[Poly]) -> Scalar {
    if gb.is_empty() || s.is_constant() {
        return s.clone();
    }
    let o = MonomialOrder::degrevlex();
    let f = s.to_frac();
    let num = groebner::normal_form(f.numer(), gb, &o);
    let den = groebner::normal_form(f.denom(), gb, &o);
    Scalar::fraction(num, den).expect("denominator stays nonzero on the stratum")
}

#[derive(Clone, Debug)]
struct State {
    rows: Vec<Vec<Scalar>>,
    conds: ConditionSet,
    gb: Vec<Poly>,
    next_row: usize,
    col: usize,
    pivots: Vec<usize>,
}

impl State {
    fn reduce_all(&mut self) {
        let gb = self.gb.clone();
        for row in &mut self.rows {
            for x in row.iter_mut() {
                *x = reduce_scalar(x, &gb);
            }
        }
    }

    fn pivot(&mut self, r: usize) {
        let c = self.col;
        self.rows.swap(r, self.next_row);
        let p = self.next_row;
        let inv = self.rows[p][c].inv().expect("nonzero pivot");
        self.rows[p] = self.rows[p].iter().map(|x| x.clone() * &inv).collect();
        let prow = self.rows[p].clone();
        for i in 0..self.rows.len() {
            if i == p || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            self.rows[i] = self.rows[i]
                .iter()
                .zip(&prow)
                .map(|(a, b)| a.clone() - f.clone() * b)
                .collect();
        }
        self.reduce_all();
        self.pivots.push(c);
        self.next_row += 1;
        self.col += 1;
    }
}

enum Fork {
    /// `p ≠ 0` is implied or chosen: continue with the pivot.
    Pivot(State),
    /// `p = 0` assumed: continue with the same column.
    Vanish(State),
}

/// Split `s` on the numerator `p` of the entry at `(r, col)`.
fn split(s: State, p: &Poly) -> Result<Vec<Fork>, ParamError> {
    let num = normalize_poly(p);
    let mut ne = s.clone();
    ne.conds.add_inequation(&num);
    let mut eq = s;
    eq.conds.add_equation(&num);
    let mut out = Vec::new();
    if ne.conds.is_consistent()? {
        out.push(Fork::Pivot(ne));
    }
    if eq.conds.is_consistent()? {
        eq.gb = eq.conds.basis()?;
        eq.reduce_all();
        out.push(Fork::Vanish(eq));
    }
    Ok(out)
}

/// A finished elimination path.
#[derive(Clone, Debug)]
struct Leaf {
    rows: Vec<Vec<Scalar>>,
    conds: ConditionSet,
    pivots: Vec<usize>,
}

/// Column-by-column elimination over the first `pivot_cols` columns; returns
/// the leaves in depth-first order, nonvanishing branch first.
fn eliminate(
    rows: Vec<Vec<Scalar>>,
    pivot_cols: usize,
    base: &ConditionSet,
) -> Result<Vec<Leaf>, ParamError> {
    let gb = base.basis()?;
    let mut start = State {
        rows,
        conds: base.clone(),
        gb,
        next_row: 0,
        col: 0,
        pivots: Vec::new(),
    };
    start.reduce_all();
    let mut stack = vec![start];
    let mut leaves = Vec::new();
    while let Some(mut s) = stack.pop() {
        loop {
            if s.col >= pivot_cols || s.next_row >= s.rows.len() {
                leaves.push(Leaf {
                    rows: s.rows,
                    conds: s.conds,
                    pivots: s.pivots,
                });
                break;
            }
            let c = s.col;
            let cands: Vec<usize> = (s.next_row..s.rows.len())
                .filter(|&i| !s.rows[i][c].is_zero())
                .collect();
            if cands.is_empty() {
                s.col += 1;
                continue;
            }
            if let Some(&r) = cands.iter().find(|&&i| s.rows[i][c].is_constant()) {
                s.pivot(r);
                continue;
            }
            let mut implied = None;
            for &i in &cands {
                let num = s.rows[i][c].to_frac().numer().clone();
                let test = s.conds.clone().with_equation(&num);
                if !test.is_consistent()? {
                    implied = Some(i);
                    break;
                }
            }
            if let Some(r) = implied {
                s.pivot(r);
                continue;
            }
            let r = cands[0];
            let num = s.rows[r][c].to_frac().numer().clone();
            let forks = split(s, &num)?;
            let mut next = None;
            for f in forks.into_iter().rev() {
                match f {
                    Fork::Pivot(mut t) => {
                        t.pivot(r);
                        if next.is_none() {
                            next = Some(t);
                        } else {
                            stack.push(next.replace(t).expect("set"));
                        }
                    }
                    Fork::Vanish(t) => {
                        if let Some(prev) = next.replace(t) {
                            stack.push(prev);
                        }
                    }
                }
            }
            match next {
                Some(t) => s = t,
                None => break,
            }
        }
    }
    Ok(leaves)
}

/// Rank on each stratum of a case split refining `base`.
pub fn rank_strata(
    m: &Matrix<Scalar>,
    base: &ConditionSet,
) -> Result<Vec<(ConditionSet, usize)>, ParamError> {
    let leaves = eliminate(m.to_rows(), m.cols(), base)?;
    leaves
        .into_iter()
        .map(|l| Ok((l.conds.simplified()?, l.pivots.len())))
        .collect()
}

/// One branch of a parametric solution. `values[u]` expresses unknown `u`
/// through the parameters, including the free variables in `free`.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub conditions: ConditionSet,
    pub values: Vec<Scalar>,
    pub free: Vec<(usize, usize)>,
}

/// The outcome of [`parametric_solve_linear`]. `ctx` extends the input context
/// with the free-variable names.
#[derive(Clone, Debug)]
pub struct CaseSplitSolution {
    pub ctx: ParameterContext,
    pub unknowns: Vec<String>,
    pub branches: Vec<Branch>,
    pub dropped: Vec<ConditionSet>,
}

impl CaseSplitSolution {
    /// `{theta0: 0, …}` per branch, as the solver prints it.
    pub fn render_branch(&self, b: &Branch) -> String {
        let parts: Vec<String> = self
            .unknowns
            .iter()
            .zip(&b.values)
            .map(|(u, v)| format!("{u}: {}", v.render(&self.ctx)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn to_json(&self) -> Value {
        let branches: Vec<Value> = self
            .branches
            .iter()
            .map(|b| {
                let sol: serde_json::Map<String, Value> = self
                    .unknowns
                    .iter()
                    .zip(&b.values)
                    .map(|(u, v)| (u.clone(), Value::String(v.render(&self.ctx))))
                    .collect();
                let free: Vec<String> = b.free.iter().map(|(_, p)| self.ctx.name(*p)).collect();
                json!({ "conditions": b.conditions.to_json(&self.ctx), "solution": sol, "free": free })
            })
            .collect();
        let dropped: Vec<Value> = self.dropped.iter().map(|c| c.to_json(&self.ctx)).collect();
        json!({ "branches": branches, "inconsistent": dropped })
    }
}

/// Names `r1, r2, …` skipping those already declared in `ctx`.
fn free_names(ctx: &ParameterContext, count: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut k = 1;
    while out.len() < count {
        let name = format!("r{k}");
        if ctx.index_of(&name).is_none() {
            out.push(name);
        }
        k += 1;
    }
    out
}

/// Solve `A·x = b` with case splits on parameter-dependent pivots. Free
/// unknowns are named in reverse unknown order; names repeat across branches.
pub fn parametric_solve_linear(
    a: &Matrix<Scalar>,
    b: &[Scalar],
    unknowns: &[String],
    ctx: &ParameterContext,
    base: &ConditionSet,
) -> Result<CaseSplitSolution, ParamError> {
    if b.len() != a.rows() {
        return Err(ParamError::ShapeMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    if unknowns.len() != a.cols() {
        return Err(ParamError::ShapeMismatch {
            expected: a.cols(),
            got: unknowns.len(),
        });
    }
    let n = a.cols();
    let rows: Vec<Vec<Scalar>> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut done = Vec::new();
    let mut dropped = Vec::new();
    for leaf in eliminate(rows, n, base)? {
        let r0 = leaf.pivots.len();
        let rhs: Vec<(usize, Scalar)> = (r0..leaf.rows.len())
            .map(|i| (i, leaf.rows[i][n].clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if rhs.is_empty() {
            done.push(leaf);
            continue;
        }
        let mut conds = leaf.conds.clone();
        for (_, v) in &rhs {
            conds.add_equation(v.to_frac().numer());
        }
        if conds.is_consistent()? {
            let gb = conds.basis()?;
            let rows = leaf
                .rows
                .iter()
                .map(|r| r.iter().map(|x| reduce_scalar(x, &gb)).collect())
                .collect();
            done.push(Leaf {
                rows,
                conds,
                pivots: leaf.pivots.clone(),
            });
        }
        let mut bad = leaf.conds.clone();
        let nums: Vec<Poly> = rhs
            .iter()
            .map(|(_, v)| v.to_frac().numer().clone())
            .collect();
        bad.add_inequation(&norm_sum(&nums));
        dropped.push(bad.simplified()?);
    }
    let max_free = done.iter().map(|l| n - l.pivots.len()).max().unwrap_or(0);
    let names = free_names(ctx, max_free);
    let mut out_ctx = ctx.clone();
    let mut branches = Vec::new();
    for leaf in done {
        let free_cols: Vec<usize> = (0..n).rev().filter(|c| !leaf.pivots.contains(c)).collect();
        let mut values = vec![Scalar::zero(); n];
        let mut free = Vec::new();
        for (k, &c) in free_cols.iter().enumerate() {
            let p = out_ctx.ensure(&names[k])?.index;
            values[c] = Scalar::param(p);
            free.push((c, p));
        }
        for (i, &c) in leaf.pivots.iter().enumerate() {
            let mut v = leaf.rows[i][n].clone();
            for &(f, p) in &free {
                let coef = &leaf.rows[i][f];
                if !coef.is_zero() {
                    v = v - coef.clone() * Scalar::param(p);
                }
            }
            values[c] = v;
        }
        free.sort();
        branches.push(Branch {
            conditions: leaf.conds.simplified()?,
            values,
            free,
        });
    }
    Ok(CaseSplitSolution {
        ctx: out_ctx,
        unknowns: unknowns.to_vec(),
        branches,
        dropped,
    })
}

/// Substitute `rules` into every coefficient of `phi`.
pub fn simplify_form(
    phi: &ExteriorElement,
    rules: &BTreeMap<usize, Scalar>,
    ctx: &ParameterContext,
) -> Result<ExteriorElement, ExteriorError> {
    Ok(phi.substitute(rules, ctx)?)
}

/// Substitute a branch's solution, mapping unknown parameters to their values.
pub fn apply_branch(
    phi: &ExteriorElement,
    unknown_params: &[usize],
    branch: &Branch,
    ctx: &ParameterContext,
) -> Result<ExteriorElement, ExteriorError> {
    let rules: BTreeMap<usize, Scalar> = unknown_params
        .iter()
        .copied()
        .zip(branch.values.iter().cloned())
        .collect();
    simplify_form(phi, &rules, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::parse_scalar;

    fn m(ctx: &ParameterContext, rows: usize, cols: usize, v: &[&str]) -> Matrix<Scalar> {
        Matrix::from_fn(rows, cols, |i, j| {
            parse_scalar(v[i * cols + j], ctx).unwrap()
        })
    }

    #[test]
    fn rank_docstring_examples() {
        let ctx = ParameterContext::from_names(&["t"]).unwrap();
        let a = m(&ctx, 3, 2, &["t", "0", "0", "1", "0", "0"]);
        let r = parametric_rank(&a).unwrap();
        assert_eq!(
            r.render(&ctx),
            "{0: impossible, 1: [[t == 0]], 2: [[t != 0]]}"
        );
        let b = m(&ctx, 3, 2, &["0", "0", "0", "1", "0", "0"]);
        assert_eq!(parametric_rank(&b).unwrap().render(&ctx), "1");
        let id = Matrix::<Scalar>::identity(3);
        assert_eq!(parametric_rank(&id).unwrap().unconditional(), Some(3));
    }

    #[test]
    fn rank_tree_matches_minors() {
        let ctx = ParameterContext::from_names(&["t"]).unwrap();
        let a = m(&ctx, 2, 2, &["t", "1", "1", "t"]);
        let tree = rank_strata(&a, &ConditionSet::new()).unwrap();
        let rendered: Vec<String> = tree
            .iter()
            .map(|(c, r)| format!("{r} {}", c.render(&ctx)))
            .collect();
        assert_eq!(rendered, vec!["2 [t^2 - 1 != 0]", "1 [t^2 - 1 == 0]"]);
    }

    #[test]
    fn normalization() {
        let ctx = ParameterContext::from_names(&["t"]).unwrap();
        let p = parse_scalar("-2/3*t + 4/3", &ctx)
            .unwrap()
            .to_poly()
            .unwrap();
        assert_eq!(normalize_poly(&p).fmt_with(&ctx.namer()), "t - 2");
        let cs = ConditionSet::new().with_equation(&p).with_inequation(&p);
        assert!(cs.is_trivially_inconsistent());
        assert!(!cs.is_consistent().unwrap());
    }

    #[test]
    fn solve_with_case_split() {
        let ctx = ParameterContext::from_names(&["t"]).unwrap();
        let a = m(&ctx, 1, 2, &["t", "1"]);
        let unknowns = vec!["x".to_string(), "y".to_string()];
        let s =
            parametric_solve_linear(&a, &[Scalar::one()], &unknowns, &ctx, &ConditionSet::new())
                .unwrap();
        assert_eq!(s.branches.len(), 2);
        assert_eq!(s.branches[0].conditions.render(&s.ctx), "[t != 0]");
        assert_eq!(s.render_branch(&s.branches[0]), "{x: (-r1 + 1)/t, y: r1}");
        assert_eq!(s.branches[1].conditions.render(&s.ctx), "[t == 0]");
        assert_eq!(s.render_branch(&s.branches[1]), "{x: r1, y: 1}");
    }

    #[test]
    fn inconsistent_branches_are_recorded() {
        let ctx = ParameterContext::from_names(&["t"]).unwrap();
        let a = m(&ctx, 2, 1, &["1", "1"]);
        let unknowns = vec!["x".to_string()];
        let b = [Scalar::one(), Scalar::param(0)];
        let s = parametric_solve_linear(&a, &b, &unknowns, &ctx, &ConditionSet::new()).unwrap();
        assert_eq!(s.branches.len(), 1);
        assert_eq!(s.branches[0].conditions.render(&s.ctx), "[t - 1 == 0]");
        assert_eq!(s.dropped[0].render(&s.ctx), "[t - 1 != 0]");
        let zero = Matrix::<Scalar>::zeros(2, 3);
        let u: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let all = parametric_solve_linear(
            &zero,
            &[Scalar::zero(), Scalar::zero()],
            &u,
            &ctx,
            &ConditionSet::new(),
        )
        .unwrap();
        assert_eq!(all.render_branch(&all.branches[0]), "{a: r3, b: r2, c: r1}");
    }

    #[test]
    fn simplify_form_substitutes() {
        let ctx = ParameterContext::from_names(&["a0", "a01", "a012"]).unwrap();
        let phi =
            crate::exterior::parse_element("a0*e0 + a01*e0^e1 + a012*e0^e1^e2", 4, &ctx).unwrap();
        let rules = BTreeMap::from([
            (0, Scalar::one()),
            (1, Scalar::zero()),
            (2, Scalar::int(-1)),
        ]);
        assert_eq!(
            simplify_form(&phi, &rules, &ctx).unwrap().render(&ctx),
            "-e0^e1^e2 + e0"
        );
        assert_eq!(simplify_form(&phi, &BTreeMap::new(), &ctx).unwrap(), phi);
    }
}
