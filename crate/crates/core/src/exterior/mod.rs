//! The exterior algebra on `n` generators over [`Scalar`](crate::coeff::Scalar).

mod element;
mod morphism;
mod parse;

pub use element::ExteriorElement;
pub use morphism::LinearMorphism;
pub use parse::{parse_element, parse_element_with};

use std::collections::HashMap;

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("generator count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("at most {MAX_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("generator index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("repeated generator index {0} in blade")]
    RepeatedIndex(usize),
    #[error("matrix must be {n}x{n}, got {rows}x{cols}")]
    BadMatrix { n: usize, rows: usize, cols: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Coeff(#[from] crate::coeff::CoeffError),
}

/// A basis monomial `e_{j1}∧…∧e_{jk}` with `j1 < … < jk`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Blade(pub u64);

impl Blade {
    pub const ONE: Blade = Blade(0);

    pub fn generator(j: usize) -> Blade {
        Blade(1 << j)
    }

    /// Blade from strictly increasing or unordered distinct indices.
    pub fn from_indices(ix: &[usize]) -> Result<Blade, ExteriorError> {
        let mut m = 0u64;
        for &j in ix {
            if j >= MAX_GENERATORS {
                return Err(ExteriorError::TooManyGenerators(j + 1));
            }
            if m & (1 << j) != 0 {
                return Err(ExteriorError::RepeatedIndex(j));
            }
            m |= 1 << j;
        }
        Ok(Blade(m))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 & (1 << j) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut m = self.0;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            out.push(j);
            m &= m - 1;
        }
        out
    }

    /// Highest generator index plus one.
    pub fn width(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Sign of `a ∧ b` relative to the merged blade, or `None` if they share an index.
    pub fn wedge_sign(a: Blade, b: Blade) -> Option<i64> {
        if a.0 & b.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut m = b.0;
        while m != 0 {
            let j = m.trailing_zeros();
            let above = if j >= 63 { 0 } else { a.0 >> (j + 1) };
            swaps += above.count_ones();
            m &= m - 1;
        }
        Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
    }

    /// Lexicographic comparison of index tuples.
    pub fn cmp_lex(self, other: Blade) -> std::cmp::Ordering {
        self.indices().cmp(&other.indices())
    }

    pub fn render(self, names: &dyn Fn(usize) -> String) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let parts: Vec<String> = self.indices().into_iter().map(names).collect();
        parts.join("^")
    }
}

/// Degree-`k` blades on `n` generators in lexicographic order of index tuples.
pub fn basis(n: usize, k: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut ix: Vec<usize> = (0..k).collect();
    loop {
        out.push(Blade(ix.iter().fold(0u64, |m, &j| m | (1 << j))));
        let mut i = k;
        while i > 0 && ix[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        ix[i - 1] += 1;
        for t in i..k {
            ix[t] = ix[t - 1] + 1;
        }
    }
}

/// A degree-`k` basis paired with a blade → position lookup.
#[derive(Clone, Debug)]
pub struct BasisIndex {
    pub blades: Vec<Blade>,
    pos: HashMap<Blade, usize>,
}

impl BasisIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let blades = basis(n, k);
        let pos = blades.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        BasisIndex { blades, pos }
    }

    pub fn from_blades(blades: Vec<Blade>) -> Self {
        let pos = blades.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        BasisIndex { blades, pos }
    }

    pub fn len(&self) -> usize {
        self.blades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blades.is_empty()
    }

    pub fn position(&self, b: Blade) -> Option<usize> {
        self.pos.get(&b).copied()
    }
}

pub(crate) fn default_generator_name(j: usize) -> String {
    format!("e{j}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_lexicographic() {
        let b: Vec<Vec<usize>> = basis(4, 2).into_iter().map(Blade::indices).collect();
        assert_eq!(
            b,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(basis(6, 3).len(), 20);
        assert_eq!(basis(3, 0), vec![Blade::ONE]);
        assert_eq!(basis(3, 3).len(), 1);
        assert!(basis(2, 3).is_empty());
        assert!(basis(0, 1).is_empty());
        assert_eq!(basis(0, 0), vec![Blade::ONE]);
    }

    #[test]
    fn wedge_signs() {
        let e = Blade::generator;
        assert_eq!(Blade::wedge_sign(e(2), e(3)), Some(1));
        assert_eq!(Blade::wedge_sign(e(3), e(2)), Some(-1));
        assert_eq!(Blade::wedge_sign(e(0), e(0)), None);
        let a = Blade::from_indices(&[1, 3]).unwrap();
        let b = Blade::from_indices(&[0, 2]).unwrap();
        assert_eq!(Blade::wedge_sign(a, b), Some(-1));
    }
}
