use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use super::{default_generator_name, Blade, ExteriorError, MAX_GENERATORS};
use crate::coeff::{parse_scalar, CoeffError, Field, ParameterContext, Scalar};

/// A sparse linear combination of blades with exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExteriorElement {
    n: usize,
    terms: BTreeMap<Blade, Scalar>,
}

impl ExteriorElement {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS, "too many generators");
        ExteriorElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        Self::blade(n, Blade::ONE, c)
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    pub fn generator(n: usize, j: usize) -> Self {
        assert!(j < n, "generator index out of range");
        Self::blade(n, Blade::generator(j), Scalar::one())
    }

    pub fn blade(n: usize, b: Blade, c: Scalar) -> Self {
        let mut e = Self::zero(n);
        e.add_term(b, c);
        e
    }

    /// Checked constructor from index lists.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
    ) -> Result<Self, ExteriorError> {
        if n > MAX_GENERATORS {
            return Err(ExteriorError::TooManyGenerators(n));
        }
        let mut e = Self::zero(n);
        for (ix, c) in terms {
            if let Some(&j) = ix.iter().find(|&&j| j >= n) {
                return Err(ExteriorError::IndexOutOfRange { index: j, n });
            }
            let b = Blade::from_indices(&ix)?;
            let sign = permutation_sign(&ix);
            e.add_term(b, if sign < 0 { -c } else { c });
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, b: Blade, c: Scalar) {
        debug_assert!(b.width() <= self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(v) => {
                let s = v.clone() + &c;
                if s.is_zero() {
                    self.terms.remove(&b);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_of(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The common degree of all terms, or `None` for mixed or zero elements.
    pub fn pure_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| b.degree());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        ExteriorElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.degree() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn params(&self) -> BTreeSet<usize> {
        self.terms.values().flat_map(Scalar::params).collect()
    }

    fn check(&self, other: &Self) -> Result<(), ExteriorError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(ExteriorError::DimensionMismatch(self.n, other.n))
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        let mut out = Self::zero(self.n);
        for (b, v) in &self.terms {
            out.add_term(*b, v.clone() * c);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check(other)?;
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(s) = Blade::wedge_sign(*a, *b) {
                    let c = ca.clone() * cb;
                    out.add_term(Blade(a.0 | b.0), if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Contraction of `self` by `x`, pairing blades orthonormally.
    pub fn interior_product(&self, x: &Self) -> Result<Self, ExteriorError> {
        self.check(x)?;
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &x.terms {
                if a.0 & b.0 != b.0 {
                    continue;
                }
                let rest = Blade(a.0 & !b.0);
                let s = Blade::wedge_sign(*b, rest).expect("disjoint");
                let c = ca.clone() * cb;
                out.add_term(rest, if s < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Complement blade with the sign making `b ∧ b* = e0∧…∧e_{n-1}`.
    pub fn hodge_dual(&self) -> Self {
        let full = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        let mut out = Self::zero(self.n);
        for (b, c) in &self.terms {
            let comp = Blade(full & !b.0);
            let s = Blade::wedge_sign(*b, comp).expect("disjoint");
            out.add_term(comp, if s < 0 { -c.clone() } else { c.clone() });
        }
        out
    }

    pub fn conjugate(&self) -> Self {
        ExteriorElement {
            n: self.n,
            terms: self.terms.iter().map(|(b, c)| (*b, c.conj())).collect(),
        }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn try_map_coeffs<E>(
        &self,
        mut f: impl FnMut(&Scalar) -> Result<Scalar, E>,
    ) -> Result<Self, E> {
        let mut out = Self::zero(self.n);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c)?);
        }
        Ok(out)
    }

    /// Substitute parameter values in every coefficient.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<usize, Scalar>,
        ctx: &ParameterContext,
    ) -> Result<Self, CoeffError> {
        self.try_map_coeffs(|c| c.substitute(assignment, ctx))
    }

    /// Re-embed into an algebra with `m ≥ width` generators.
    pub fn with_generators(&self, m: usize) -> Result<Self, ExteriorError> {
        if let Some(b) = self.terms.keys().find(|b| b.width() > m) {
            return Err(ExteriorError::IndexOutOfRange {
                index: b.width() - 1,
                n: m,
            });
        }
        Ok(ExteriorElement {
            n: m,
            terms: self.terms.clone(),
        })
    }

    /// Terms in display order: degree descending, then lexicographic.
    pub fn sorted_terms(&self) -> Vec<(Blade, &Scalar)> {
        let mut t: Vec<_> = self.terms.iter().map(|(b, c)| (*b, c)).collect();
        t.sort_by(|a, b| {
            b.0.degree()
                .cmp(&a.0.degree())
                .then_with(|| a.0.cmp_lex(b.0))
        });
        t
    }

    pub fn render_with(
        &self,
        gens: &dyn Fn(usize) -> String,
        params: &dyn Fn(usize) -> String,
    ) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let single = self.terms.len() == 1;
        let mut out = String::new();
        for (k, (b, c)) in self.sorted_terms().into_iter().enumerate() {
            let cs = c.fmt_with(params);
            let t = if b == Blade::ONE {
                if c.is_compound() && !single {
                    format!("({cs})")
                } else {
                    cs
                }
            } else {
                let bs = b.render(gens);
                if c.is_one() {
                    bs
                } else if (-c.clone()).is_one() {
                    format!("-{bs}")
                } else if c.is_compound() {
                    format!("({cs})*{bs}")
                } else {
                    format!("{cs}*{bs}")
                }
            };
            if k == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }

    /// Render with `e0, e1, …` generator names and the context's parameter names.
    pub fn render(&self, ctx: &ParameterContext) -> String {
        self.render_with(&default_generator_name, &ctx.namer())
    }

    /// `[{"blade":[0,1],"coeff":"3"}, …]` in display order.
    pub fn to_json(&self, ctx: &ParameterContext) -> Value {
        Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(b, c)| json!({"blade": b.indices(), "coeff": c.render(ctx)}))
                .collect(),
        )
    }

    pub fn from_json(n: usize, v: &Value, ctx: &ParameterContext) -> Result<Self, ExteriorError> {
        let bad = |msg: &str| ExteriorError::Parse {
            pos: 0,
            msg: msg.to_string(),
        };
        let arr = v
            .as_array()
            .ok_or_else(|| bad("expected an array of terms"))?;
        let mut terms = Vec::new();
        for t in arr {
            let blade = t
                .get("blade")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term needs a 'blade' index list"))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|v| v as usize)
                        .ok_or_else(|| bad("blade indices must be integers"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let coeff = match t.get("coeff") {
                Some(Value::String(s)) => parse_scalar(s, ctx)?,
                Some(Value::Number(x)) => parse_scalar(&x.to_string(), ctx)?,
                _ => return Err(bad("term needs a 'coeff' string")),
            };
            terms.push((blade, coeff));
        }
        Self::from_terms(n, terms)
    }
}

fn permutation_sign(ix: &[usize]) -> i64 {
    let mut inv = 0usize;
    for a in 0..ix.len() {
        for b in a + 1..ix.len() {
            if ix[a] > ix[b] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&ParameterContext::new()))
    }
}

impl<'a> Add<&'a ExteriorElement> for &'a ExteriorElement {
    type Output = ExteriorElement;
    /// Panics if the generator counts differ; see [`ExteriorElement::try_add`].
    fn add(self, rhs: &'a ExteriorElement) -> ExteriorElement {
        self.try_add(rhs).expect("generator count mismatch")
    }
}

impl Add for ExteriorElement {
    type Output = ExteriorElement;
    fn add(mut self, rhs: ExteriorElement) -> ExteriorElement {
        assert_eq!(self.n, rhs.n, "generator count mismatch");
        for (b, c) in rhs.terms {
            self.add_term(b, c);
        }
        self
    }
}

impl<'a> Sub<&'a ExteriorElement> for &'a ExteriorElement {
    type Output = ExteriorElement;
    fn sub(self, rhs: &'a ExteriorElement) -> ExteriorElement {
        self + &(-rhs.clone())
    }
}

impl Sub for ExteriorElement {
    type Output = ExteriorElement;
    fn sub(self, rhs: ExteriorElement) -> ExteriorElement {
        self + (-rhs)
    }
}

impl Neg for ExteriorElement {
    type Output = ExteriorElement;
    fn neg(self) -> ExteriorElement {
        ExteriorElement {
            n: self.n,
            terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a ExteriorElement> for &'a ExteriorElement {
    type Output = ExteriorElement;
    /// Wedge product; panics if the generator counts differ.
    fn mul(self, rhs: &'a ExteriorElement) -> ExteriorElement {
        self.wedge(rhs).expect("generator count mismatch")
    }
}
