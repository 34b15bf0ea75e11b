//! Gröbner bases of polynomial ideals by Buchberger's algorithm.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coeff::{Field, Monomial, Polynomial};

/// Default cap on the number of S-pair reductions.
pub const DEFAULT_PAIR_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("pair budget of {0} reductions exhausted")]
    BudgetExhausted(usize),
    #[error("variable priority must be a permutation, got {0:?}")]
    BadPriority(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    DegRevLex,
    Lex,
    DegLex,
}

/// A monomial order: a kind plus a variable priority, `priority[0]` being the
/// largest variable. Variables missing from the list rank below it, in index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    /// Variable 0 largest.
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder {
            kind,
            priority: Vec::new(),
        }
    }

    pub fn degrevlex() -> Self {
        Self::new(OrderKind::DegRevLex)
    }

    pub fn lex() -> Self {
        Self::new(OrderKind::Lex)
    }

    pub fn deglex() -> Self {
        Self::new(OrderKind::DegLex)
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self, GroebnerError> {
        let set: BTreeSet<_> = priority.iter().collect();
        if set.len() != priority.len() {
            return Err(GroebnerError::BadPriority(priority));
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    /// Exponents rearranged so that position 0 holds the largest variable.
    fn ranked(&self, m: &Monomial, width: usize) -> Vec<u32> {
        let mut out: Vec<u32> = self.priority.iter().map(|&v| m.exp(v)).collect();
        let listed: BTreeSet<usize> = self.priority.iter().copied().collect();
        for v in 0..width.max(m.width()) {
            if !listed.contains(&v) {
                out.push(m.exp(v));
            }
        }
        out
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if self.priority.is_empty() && self.kind == OrderKind::DegRevLex {
            return a.cmp_degrevlex(b);
        }
        let w = a.width().max(b.width());
        cmp_ranked(self.kind, &self.ranked(a, w), &self.ranked(b, w))
    }
}

fn cmp_ranked(kind: OrderKind, a: &[u32], b: &[u32]) -> Ordering {
    let n = a.len().max(b.len());
    let at = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
    let deg = |v: &[u32]| v.iter().map(|&e| e as u64).sum::<u64>();
    let lex = || {
        for i in 0..n {
            match at(a, i).cmp(&at(b, i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    };
    match kind {
        OrderKind::Lex => lex(),
        OrderKind::DegLex => deg(a).cmp(&deg(b)).then_with(lex),
        OrderKind::DegRevLex => deg(a).cmp(&deg(b)).then_with(|| {
            for i in (0..n).rev() {
                match at(a, i).cmp(&at(b, i)) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                }
            }
            Ordering::Equal
        }),
    }
}

/// Dense-exponent polynomial with terms sorted in decreasing order.
#[derive(Clone, Debug)]
struct Sorted<C> {
    terms: Vec<(Vec<u32>, C)>,
}

struct Ring {
    kind: OrderKind,
    width: usize,
    /// `slot[v]` is the ranked position of variable `v`.
    slot: Vec<usize>,
    /// `var[p]` is the variable at ranked position `p`.
    var: Vec<usize>,
}

impl Ring {
    fn new<C: Field>(order: &MonomialOrder, polys: &[&Polynomial<C>]) -> Ring {
        let mut width = order.priority.iter().map(|&v| v + 1).max().unwrap_or(0);
        for p in polys {
            width = width.max(p.max_var().map_or(0, |v| v + 1));
        }
        let mut var: Vec<usize> = order.priority.clone();
        let listed: BTreeSet<usize> = var.iter().copied().collect();
        var.extend((0..width).filter(|v| !listed.contains(v)));
        let mut slot = vec![0; width];
        for (p, &v) in var.iter().enumerate() {
            slot[v] = p;
        }
        Ring {
            kind: order.kind,
            width,
            slot,
            var,
        }
    }

    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        cmp_ranked(self.kind, a, b)
    }

    fn import<C: Field>(&self, p: &Polynomial<C>) -> Sorted<C> {
        let mut terms: Vec<(Vec<u32>, C)> = p
            .terms()
            .map(|(m, c)| {
                let mut e = vec![0u32; self.width];
                for (v, &x) in m.exponents().iter().enumerate() {
                    e[self.slot[v]] = x;
                }
                (e, c.clone())
            })
            .collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Sorted { terms }
    }

    fn export<C: Field>(&self, p: &Sorted<C>) -> Polynomial<C> {
        Polynomial::from_terms(p.terms.iter().map(|(e, c)| {
            let mut x = vec![0u32; self.width];
            for (pos, &k) in e.iter().enumerate() {
                x[self.var[pos]] = k;
            }
            (Monomial::from_exponents(x), c.clone())
        }))
    }

    /// `p − c·m·q`.
    fn sub_mul<C: Field>(&self, p: &Sorted<C>, c: &C, m: &[u32], q: &Sorted<C>) -> Sorted<C> {
        let mut out = Vec::with_capacity(p.terms.len() + q.terms.len());
        let mut i = 0;
        let shifted = |t: &(Vec<u32>, C)| -> (Vec<u32>, C) {
            (
                t.0.iter().zip(m).map(|(a, b)| a + b).collect(),
                -(t.1.clone() * c),
            )
        };
        let mut j = 0;
        while i < p.terms.len() || j < q.terms.len() {
            if j == q.terms.len() {
                out.push(p.terms[i].clone());
                i += 1;
                continue;
            }
            let s = shifted(&q.terms[j]);
            if i == p.terms.len() {
                out.push(s);
                j += 1;
                continue;
            }
            match self.cmp(&p.terms[i].0, &s.0) {
                Ordering::Greater => {
                    out.push(p.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(s);
                    j += 1;
                }
                Ordering::Equal => {
                    let v = p.terms[i].1.clone() + &s.1;
                    if !v.is_zero() {
                        out.push((s.0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Sorted { terms: out }
    }

    /// Full reduction of `f` by `g` (each `g` monic).
    fn reduce<C: Field>(&self, f: &Sorted<C>, g: &[&Sorted<C>]) -> Sorted<C> {
        let mut rem: Vec<(Vec<u32>, C)> = Vec::new();
        let mut p = f.clone();
        'outer: while !p.terms.is_empty() {
            let (lm, lc) = p.terms[0].clone();
            for q in g {
                let qm = &q.terms[0].0;
                if divides(qm, &lm) {
                    let m: Vec<u32> = lm.iter().zip(qm).map(|(a, b)| a - b).collect();
                    p = self.sub_mul(&p, &lc, &m, q);
                    continue 'outer;
                }
            }
            rem.push(p.terms.remove(0));
        }
        Sorted { terms: rem }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn monic<C: Field>(p: Sorted<C>) -> Sorted<C> {
    match p.terms.first() {
        None => p,
        Some((_, c)) => {
            let inv = c.inv().expect("nonzero");
            Sorted {
                terms: p.terms.into_iter().map(|(e, c)| (e, c * &inv)).collect(),
            }
        }
    }
}

/// The leading monomial and coefficient of `p` under `order`.
pub fn leading_term<'a, C: Field>(
    p: &'a Polynomial<C>,
    order: &MonomialOrder,
) -> Option<(&'a Monomial, &'a C)> {
    p.terms().max_by(|a, b| order.cmp(a.0, b.0))
}

/// Remainder of `f` on division by `g`.
pub fn normal_form<C: Field>(
    f: &Polynomial<C>,
    g: &[Polynomial<C>],
    order: &MonomialOrder,
) -> Polynomial<C> {
    let mut all: Vec<&Polynomial<C>> = g.iter().collect();
    all.push(f);
    let ring = Ring::new(order, &all);
    let gs: Vec<Sorted<C>> = g
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| monic(ring.import(p)))
        .collect();
    let refs: Vec<&Sorted<C>> = gs.iter().collect();
    ring.export(&ring.reduce(&ring.import(f), &refs))
}

/// The S-polynomial of `f` and `g`.
pub fn s_polynomial<C: Field>(
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    order: &MonomialOrder,
) -> Polynomial<C> {
    let ring = Ring::new(order, &[f, g]);
    let (a, b) = (monic(ring.import(f)), monic(ring.import(g)));
    if a.terms.is_empty() || b.terms.is_empty() {
        return Polynomial::zero();
    }
    ring.export(&spoly(&ring, &a, &b))
}

fn spoly<C: Field>(ring: &Ring, a: &Sorted<C>, b: &Sorted<C>) -> Sorted<C> {
    let l = lcm(&a.terms[0].0, &b.terms[0].0);
    let ma: Vec<u32> = l.iter().zip(&a.terms[0].0).map(|(x, y)| x - y).collect();
    let mb: Vec<u32> = l.iter().zip(&b.terms[0].0).map(|(x, y)| x - y).collect();
    let zero = Sorted { terms: Vec::new() };
    let left = ring.sub_mul(&zero, &-C::one(), &ma, a);
    ring.sub_mul(&left, &C::one(), &mb, b)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Vec<u32>,
    deg: u64,
}

/// Buchberger's algorithm with the coprime and chain criteria (Gebauer–Möller
/// pair update) and the normal selection strategy. Returns a Gröbner basis
/// of monic polynomials, not necessarily reduced.
pub fn buchberger<C: Field>(
    gens: &[Polynomial<C>],
    order: &MonomialOrder,
    budget: usize,
) -> Result<Vec<Polynomial<C>>, GroebnerError> {
    let all: Vec<&Polynomial<C>> = gens.iter().collect();
    let ring = Ring::new(order, &all);
    let mut basis: Vec<Sorted<C>> = Vec::new();
    let mut live: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut input: Vec<Sorted<C>> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| monic(ring.import(p)))
        .collect();
    input.sort_by(|a, b| ring.cmp(&a.terms[0].0, &b.terms[0].0));
    for p in input {
        let refs: Vec<&Sorted<C>> = basis
            .iter()
            .zip(&live)
            .filter(|(_, l)| **l)
            .map(|(g, _)| g)
            .collect();
        let r = monic(ring.reduce(&p, &refs));
        if !r.terms.is_empty() {
            update(&mut basis, &mut live, &mut pairs, r);
        }
    }
    let mut done = 0usize;
    while !pairs.is_empty() {
        let k = (0..pairs.len())
            .min_by(|&x, &y| {
                pairs[x]
                    .deg
                    .cmp(&pairs[y].deg)
                    .then_with(|| ring.cmp(&pairs[x].lcm, &pairs[y].lcm))
            })
            .expect("nonempty");
        let pr = pairs.swap_remove(k);
        if done >= budget {
            return Err(GroebnerError::BudgetExhausted(budget));
        }
        done += 1;
        let s = spoly(&ring, &basis[pr.i], &basis[pr.j]);
        let refs: Vec<&Sorted<C>> = basis
            .iter()
            .zip(&live)
            .filter(|(_, l)| **l)
            .map(|(g, _)| g)
            .collect();
        let r = monic(ring.reduce(&s, &refs));
        if !r.terms.is_empty() {
            update(&mut basis, &mut live, &mut pairs, r);
        }
    }
    Ok(basis
        .iter()
        .zip(&live)
        .filter(|(_, l)| **l)
        .map(|(g, _)| ring.export(g))
        .collect())
}

fn update<C: Field>(
    basis: &mut Vec<Sorted<C>>,
    live: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
    h: Sorted<C>,
) {
    let t = basis.len();
    let hm = h.terms[0].0.clone();
    let deg = |l: &[u32]| l.iter().map(|&e| e as u64).sum::<u64>();
    let mut c: Vec<(usize, Vec<u32>, bool)> = (0..t)
        .filter(|&i| live[i])
        .map(|i| {
            let gm = &basis[i].terms[0].0;
            (i, lcm(gm, &hm), coprime(gm, &hm))
        })
        .collect();
    let mut d: Vec<(usize, Vec<u32>, bool)> = Vec::new();
    while let Some((i, l, cp)) = c.pop() {
        let covered = c.iter().chain(d.iter()).any(|(_, l2, _)| divides(l2, &l));
        if cp || !covered {
            d.push((i, l, cp));
        }
    }
    pairs.retain(|p| {
        !divides(&hm, &p.lcm)
            || lcm(&basis[p.i].terms[0].0, &hm) == p.lcm
            || lcm(&basis[p.j].terms[0].0, &hm) == p.lcm
    });
    for (i, l, cp) in d {
        if !cp {
            let dg = deg(&l);
            pairs.push(Pair {
                i,
                j: t,
                lcm: l,
                deg: dg,
            });
        }
    }
    for i in 0..t {
        if live[i] && divides(&hm, &basis[i].terms[0].0) {
            live[i] = false;
        }
    }
    basis.push(h);
    live.push(true);
}

/// The reduced Gröbner basis from any Gröbner basis: minimal, monic,
/// interreduced, sorted by decreasing leading monomial.
pub fn reduce_basis<C: Field>(g: &[Polynomial<C>], order: &MonomialOrder) -> Vec<Polynomial<C>> {
    let all: Vec<&Polynomial<C>> = g.iter().collect();
    let ring = Ring::new(order, &all);
    let mut gs: Vec<Sorted<C>> = g
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| monic(ring.import(p)))
        .collect();
    gs.sort_by(|a, b| ring.cmp(&a.terms[0].0, &b.terms[0].0));
    let mut minimal: Vec<Sorted<C>> = Vec::new();
    for p in gs {
        let lm = &p.terms[0].0;
        if minimal.iter().any(|q| divides(&q.terms[0].0, lm)) {
            continue;
        }
        minimal.push(p);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&Sorted<C>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, q)| q)
            .collect();
        let head = Sorted {
            terms: vec![minimal[k].terms[0].clone()],
        };
        let tail = Sorted {
            terms: minimal[k].terms[1..].to_vec(),
        };
        let mut r = ring.reduce(&tail, &others);
        r.terms.insert(0, head.terms[0].clone());
        out.push(r);
    }
    out.sort_by(|a, b| ring.cmp(&b.terms[0].0, &a.terms[0].0));
    out.iter().map(|p| ring.export(p)).collect()
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis<C: Field>(
    gens: &[Polynomial<C>],
    order: &MonomialOrder,
    budget: usize,
) -> Result<Vec<Polynomial<C>>, GroebnerError> {
    Ok(reduce_basis(&buchberger(gens, order, budget)?, order))
}

/// True when every S-polynomial of `g` reduces to zero.
pub fn is_groebner<C: Field>(g: &[Polynomial<C>], order: &MonomialOrder) -> bool {
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            let s = s_polynomial(&g[a], &g[b], order);
            if !normal_form(&s, g, order).is_zero() {
                return false;
            }
        }
    }
    true
}

/// `f ∈ ⟨gens⟩`.
pub fn ideal_membership<C: Field>(
    f: &Polynomial<C>,
    gens: &[Polynomial<C>],
    order: &MonomialOrder,
    budget: usize,
) -> Result<bool, GroebnerError> {
    let g = buchberger(gens, order, budget)?;
    Ok(normal_form(f, &g, order).is_zero())
}

/// `f` vanishes on the variety of `gens` (membership in the radical), via the
/// extra variable `t` with `1 − t·f`.
pub fn radical_membership<C: Field>(
    f: &Polynomial<C>,
    gens: &[Polynomial<C>],
    budget: usize,
) -> Result<bool, GroebnerError> {
    if f.is_zero() {
        return Ok(true);
    }
    let t = gens
        .iter()
        .chain(std::iter::once(f))
        .filter_map(|p| p.max_var())
        .max()
        .map_or(0, |v| v + 1);
    let mut all = gens.to_vec();
    all.push(Polynomial::one() - Polynomial::var(t) * f.clone());
    let g = buchberger(&all, &MonomialOrder::degrevlex(), budget)?;
    Ok(g.iter().any(|p| p.is_constant() && !p.is_zero()))
}

/// The system `eqs = 0, neqs ≠ 0` has a solution over the algebraic closure.
pub fn is_consistent<C: Field>(
    eqs: &[Polynomial<C>],
    neqs: &[Polynomial<C>],
    budget: usize,
) -> Result<bool, GroebnerError> {
    let prod = neqs
        .iter()
        .fold(Polynomial::one(), |acc, p| acc * p.clone());
    Ok(!radical_membership(&prod, eqs, budget)?)
}

/// Render a basis as `[p1, p2, …]` with terms in `order`.
pub fn render_basis<C: Field>(
    g: &[Polynomial<C>],
    order: &MonomialOrder,
    names: &dyn Fn(usize) -> String,
) -> String {
    let parts: Vec<String> = g.iter().map(|p| render_in_order(p, order, names)).collect();
    format!("[{}]", parts.join(", "))
}

/// Render a polynomial with terms in decreasing `order`.
pub fn render_in_order<C: Field>(
    p: &Polynomial<C>,
    order: &MonomialOrder,
    names: &dyn Fn(usize) -> String,
) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut t: Vec<(&Monomial, &C)> = p.terms().collect();
    t.sort_by(|a, b| order.cmp(b.0, a.0));
    let mut out = String::new();
    for (k, (m, c)) in t.into_iter().enumerate() {
        let s = Polynomial::term(m.clone(), c.clone()).fmt_with(names);
        if k == 0 {
            out.push_str(&s);
        } else if let Some(rest) = s.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Rational};

    type P = Polynomial<Rational>;

    fn x(i: usize) -> P {
        P::var(i)
    }

    fn c(v: i64) -> P {
        P::constant(rat(v, 1))
    }

    #[test]
    fn orders_compare_as_expected() {
        let a = Monomial::from_exponents(vec![1, 0, 2]);
        let b = Monomial::from_exponents(vec![0, 3, 0]);
        assert_eq!(MonomialOrder::lex().cmp(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::degrevlex().cmp(&a, &b), Ordering::Less);
        assert_eq!(MonomialOrder::deglex().cmp(&a, &b), Ordering::Greater);
        let rev = MonomialOrder::with_priority(OrderKind::Lex, vec![2, 1, 0]).unwrap();
        assert_eq!(
            rev.cmp(&Monomial::var(0), &Monomial::var(2)),
            Ordering::Less
        );
        let grl = MonomialOrder::with_priority(OrderKind::DegRevLex, vec![0, 1, 2]).unwrap();
        assert_eq!(grl.cmp(&a, &b), MonomialOrder::degrevlex().cmp(&a, &b));
        assert!(MonomialOrder::with_priority(OrderKind::Lex, vec![0, 0]).is_err());
    }

    #[test]
    fn division_examples() {
        let g = x(0) * x(1) - c(1);
        assert!(normal_form(&g, std::slice::from_ref(&g), &MonomialOrder::lex()).is_zero());
        let f = x(0) * x(0) * x(1) - c(1);
        let r = normal_form(&f, &[g.clone(), x(0)], &MonomialOrder::lex());
        assert_eq!(r, c(-1));
    }

    #[test]
    fn s_polynomial_cascade() {
        let f = x(0) * x(0) + x(1) * x(1);
        let g = x(0) * x(1);
        let o = MonomialOrder::degrevlex();
        let gb = groebner_basis(&[f, g], &o, DEFAULT_PAIR_BUDGET).unwrap();
        assert!(gb.contains(&(x(1) * x(1) * x(1))));
        assert!(is_groebner(&gb, &o));
    }

    #[test]
    fn reduced_examples() {
        let o = MonomialOrder::degrevlex();
        assert_eq!(groebner_basis(&[x(0)], &o, 10).unwrap(), vec![x(0)]);
        let gb = groebner_basis(&[x(0), x(0) + x(1)], &o, 10).unwrap();
        assert_eq!(gb, vec![x(0), x(1)]);
        assert_eq!(reduce_basis(&gb, &o), gb);
    }

    #[test]
    fn membership_and_radical() {
        let o = MonomialOrder::degrevlex();
        assert!(!ideal_membership(&c(1), &[x(0)], &o, 100).unwrap());
        let sq = x(0) * x(0);
        assert!(!ideal_membership(&x(0), std::slice::from_ref(&sq), &o, 100).unwrap());
        assert!(radical_membership(&x(0), std::slice::from_ref(&sq), 100).unwrap());
        assert!(!is_consistent(&[sq], &[x(0)], 100).unwrap());
        assert!(is_consistent(&[x(0) - c(1)], &[x(0)], 100).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let gens = vec![
            x(0) * x(0) - x(1),
            x(1) * x(1) - x(2),
            x(2) * x(2) - x(0) * x(1),
        ];
        assert_eq!(
            buchberger(&gens, &MonomialOrder::lex(), 0),
            Err(GroebnerError::BudgetExhausted(0))
        );
    }

    #[test]
    fn rendering_follows_order() {
        let p = x(0) + x(1) * x(1);
        let names = |i: usize| ["a", "b"][i].to_string();
        assert_eq!(
            render_in_order(&p, &MonomialOrder::degrevlex(), &names),
            "b^2 + a"
        );
        assert_eq!(
            render_in_order(&p, &MonomialOrder::lex(), &names),
            "a + b^2"
        );
    }
}
