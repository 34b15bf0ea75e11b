use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;

/// A monomial `∏ x_j^{e_j}` stored as its exponent vector with trailing
/// zeros trimmed, so that equality does not depend on the ambient number
/// of variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        Monomial::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u32) -> Self {
        if exp == 0 {
            return Monomial::one();
        }
        let mut v = vec![0; index + 1];
        v[index] = exp;
        Monomial(v)
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of exponent slots in use (one past the largest variable).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial::from_exponents(
            (0..other.0.len())
                .map(|i| other.exp(i) - self.exp(i))
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i).max(other.exp(i))).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Graded reverse lexicographic comparison with variable 0 largest.
    pub fn cmp_degrevlex(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names(i)),
                _ => parts.push(format!("{}^{}", names(i), e)),
            }
        }
        parts.join("*")
    }
}

/// Sparse multivariate polynomial over an exact field. Variables are
/// identified by index; names live in a [`crate::coeff::ParameterContext`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

pub(crate) fn default_name(i: usize) -> String {
    format!("x{i}")
}

impl<C: Field> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(index: usize) -> Self {
        Self::term(Monomial::var(index), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.clone() + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_zero() {
            return Some(C::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.width().checked_sub(1))
            .max()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Leading term under degrevlex with variable 0 largest.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_degrevlex(b.0))
    }

    pub fn leading_coefficient(&self) -> C {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone() * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Try to convert each coefficient; fails if any conversion fails.
    pub fn try_map_coeffs<D: Field>(&self, f: impl Fn(&C) -> Option<D>) -> Option<Polynomial<D>> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Some(out)
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    /// Rename variables; `f` must be injective on the variables in use.
    pub fn rename_vars(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut exps = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let j = f(i);
                    if exps.len() <= j {
                        exps.resize(j + 1, 0);
                    }
                    exps[j] += e;
                }
            }
            (Monomial::from_exponents(exps), c.clone())
        }))
    }

    /// Evaluate into another field, replacing each variable by `value_of`.
    pub fn evaluate<T: Field>(&self, embed: impl Fn(&C) -> T, value_of: impl Fn(usize) -> T) -> T {
        let mut cache: BTreeMap<usize, T> = BTreeMap::new();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = cache.entry(i).or_insert_with(|| value_of(i)).clone();
                for _ in 0..e {
                    t = t * &v;
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute polynomials for some variables.
    pub fn substitute(&self, values: &BTreeMap<usize, Polynomial<C>>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut t = Self::one();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match values.get(&i) {
                    Some(v) => t = &t * &v.pow(e),
                    None => {
                        if kept.len() <= i {
                            kept.resize(i + 1, 0);
                        }
                        kept[i] = e;
                    }
                }
            }
            out = out + t.mul_term(&Monomial::from_exponents(kept), c);
        }
        out
    }

    pub fn derivative(&self, v: usize) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            if e == 0 {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[v] -= 1;
            Some((
                Monomial::from_exponents(exps),
                c.clone() * C::from_i64(e as i64),
            ))
        }))
    }

    /// Coefficients as a univariate polynomial in `v`.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut exps = m.exponents().to_vec();
            if v < exps.len() {
                exps[v] = 0;
            }
            out.entry(e)
                .or_insert_with(Self::zero)
                .add_term(Monomial::from_exponents(exps), c.clone());
        }
        out
    }

    fn leading_coeff_in(&self, v: usize) -> Self {
        let d = self.degree_in(v);
        self.coeffs_in(v).remove(&d).unwrap_or_else(Self::zero)
    }

    /// Make the degrevlex-leading coefficient one.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => Self::zero(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.terms.last_key_value()?;
        let dc_inv = dc.inv()?;
        let mut q = Self::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.terms.last_key_value() {
            if !dm.divides(rm) {
                return None;
            }
            let m = dm.quotient_of(rm);
            let c = rc.clone() * &dc_inv;
            r = r - d.mul_term(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Greatest common divisor, normalized to be monic (zero only if both are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Self::one();
        }
        let v = a.max_var().max(b.max_var()).expect("nonconstant");
        let (da, db) = (a.degree_in(v), b.degree_in(v));
        if da == 0 {
            return Self::gcd(a, &b.content_in(v));
        }
        if db == 0 {
            return Self::gcd(&a.content_in(v), b);
        }
        let ca = a.content_in(v);
        let cb = b.content_in(v);
        let c = Self::gcd(&ca, &cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let g = Self::primitive_prs(pa, pb, v);
        (&c * &g).monic()
    }

    fn content_in(&self, v: usize) -> Self {
        let mut g = Self::zero();
        for c in self.coeffs_in(v).values() {
            g = Self::gcd(&g, c);
            if g.is_constant() {
                return Self::one();
            }
        }
        g
    }

    fn primitive_part_in(&self, v: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    fn primitive_prs(a: Self, b: Self, v: usize) -> Self {
        let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
            (a, b)
        } else {
            (b, a)
        };
        loop {
            let r = Self::pseudo_remainder(&f, &g, v);
            if r.is_zero() {
                return g.primitive_part_in(v);
            }
            if r.degree_in(v) == 0 {
                return Self::one();
            }
            f = g;
            g = r.primitive_part_in(v);
        }
    }

    fn pseudo_remainder(f: &Self, g: &Self, v: usize) -> Self {
        let dg = g.degree_in(v);
        let lg = g.leading_coeff_in(v);
        let mut r = f.clone();
        while !r.is_zero() && r.degree_in(v) >= dg {
            let dr = r.degree_in(v);
            let lr = r.leading_coeff_in(v);
            let shift = Self::term(Monomial::var_pow(v, dr - dg), C::one());
            r = &r * &lg - &(&lr * &shift) * g;
        }
        r
    }

    /// Squarefree part (product of the distinct irreducible factors), monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let mut g = self.clone();
        for v in self.vars() {
            g = Self::gcd(&g, &self.derivative(v));
            if g.is_constant() {
                return self.monic();
            }
        }
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Terms sorted for display: degrevlex descending.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &C)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.cmp_degrevlex(a.0));
        t
    }

    /// True if the rendering has more than one term (needs parentheses as a factor).
    pub fn is_compound(&self) -> bool {
        self.terms.len() > 1 || self.terms.values().any(|c| c.is_compound())
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let t = format_term(m, c, names);
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
}

fn format_term<C: Field>(m: &Monomial, c: &C, names: &dyn Fn(usize) -> String) -> String {
    if m.is_one() {
        return c.to_string();
    }
    let ms = m.fmt_with(names);
    if c.is_one() {
        ms
    } else if (-c.clone()).is_one() {
        format!("-{ms}")
    } else if c.is_compound() {
        format!("({c})*{ms}")
    } else {
        format!("{c}*{ms}")
    }
}

impl<C: Field> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_name))
    }
}

impl<'a, C: Field> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Field> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(mut self, rhs: Polynomial<C>) -> Polynomial<C> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a, C: Field> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Field> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(mut self, rhs: Polynomial<C>) -> Polynomial<C> {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<'a, C: Field> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2);
            }
        }
        out
    }
}

impl<C: Field> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Polynomial<C>) -> Polynomial<C> {
        &self * &rhs
    }
}

impl<C: Field> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}
