use super::{basis, BasisIndex, ExteriorElement, ExteriorError};
use crate::coeff::{Field, Scalar};
use crate::linalg::Matrix;

/// The algebra endomorphism of ∧• induced by a linear map on generators,
/// with the column convention `Φ(e_j) = Σ_k mat[k][j]·e_k`.
#[derive(Clone, Debug)]
pub struct LinearMorphism {
    mat: Matrix<Scalar>,
    images: Vec<ExteriorElement>,
}

impl LinearMorphism {
    pub fn new(mat: Matrix<Scalar>) -> Result<Self, ExteriorError> {
        let n = mat.rows();
        if mat.cols() != n {
            return Err(ExteriorError::BadMatrix {
                n,
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let images = (0..n)
            .map(|j| {
                let mut e = ExteriorElement::zero(n);
                for k in 0..n {
                    e.add_term(super::Blade::generator(k), mat.get(k, j).clone());
                }
                e
            })
            .collect();
        Ok(LinearMorphism { mat, images })
    }

    /// Check that `mat` is `n×n` before lifting.
    pub fn for_algebra(n: usize, mat: Matrix<Scalar>) -> Result<Self, ExteriorError> {
        if mat.rows() != n || mat.cols() != n {
            return Err(ExteriorError::BadMatrix {
                n,
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        Self::new(mat)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Matrix::identity(n)).expect("square")
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.mat
    }

    pub fn image_of_generator(&self, j: usize) -> &ExteriorElement {
        &self.images[j]
    }

    pub fn apply(&self, a: &ExteriorElement) -> Result<ExteriorElement, ExteriorError> {
        let n = self.n();
        if a.n() != n {
            return Err(ExteriorError::DimensionMismatch(n, a.n()));
        }
        let mut out = ExteriorElement::zero(n);
        for (b, c) in a.terms() {
            let mut img = ExteriorElement::scalar(n, c.clone());
            for j in b.indices() {
                img = img.wedge(&self.images[j])?;
                if img.is_zero() {
                    break;
                }
            }
            out = out + img;
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMorphism) -> Result<Self, ExteriorError> {
        if self.n() != other.n() {
            return Err(ExteriorError::DimensionMismatch(self.n(), other.n()));
        }
        Self::new(self.mat.mul(&other.mat))
    }

    /// Matrix of the induced map on degree `k` in the canonical blade order.
    pub fn on_degree(&self, k: usize) -> Matrix<Scalar> {
        let n = self.n();
        let idx = BasisIndex::new(n, k);
        let mut m = Matrix::zeros(idx.len(), idx.len());
        for (col, b) in basis(n, k).into_iter().enumerate() {
            let img = self
                .apply(&ExteriorElement::blade(n, b, Scalar::one()))
                .expect("same n");
            for (t, c) in img.terms() {
                m.set(idx.position(*t).expect("degree preserved"), col, c.clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ParameterContext;

    fn mat_j() -> Matrix<Scalar> {
        let mut m = Matrix::zeros(6, 6);
        for p in 0..3 {
            m.set(2 * p + 1, 2 * p, Scalar::one());
            m.set(2 * p, 2 * p + 1, Scalar::int(-1));
        }
        m
    }

    #[test]
    fn complex_structure_lift() {
        let j = LinearMorphism::new(mat_j()).unwrap();
        let ctx = ParameterContext::new();
        let e = |k| ExteriorElement::generator(6, k);
        assert_eq!(j.apply(&e(0)).unwrap().render(&ctx), "e1");
        assert_eq!(j.apply(&e(1)).unwrap().render(&ctx), "-e0");
        assert_eq!(j.apply(&(&e(0) * &e(2))).unwrap().render(&ctx), "e1^e3");
        let id = LinearMorphism::identity(6);
        let x = &(&e(0) * &e(3)) + &e(5);
        assert_eq!(id.apply(&x).unwrap(), x);
        assert_eq!(
            j.apply(&ExteriorElement::one(6)).unwrap(),
            ExteriorElement::one(6)
        );
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(LinearMorphism::new(Matrix::zeros(2, 3)).is_err());
        assert!(LinearMorphism::for_algebra(4, Matrix::identity(3)).is_err());
    }
}
