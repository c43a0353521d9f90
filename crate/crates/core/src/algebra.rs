//! The matrix algebra `A = M_n(K)`: inversion, involutions, the
//! hermitian/anti-hermitian split and materialized linear operators on `A`.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{RingDescriptor, Scalar};

/// An element of `M_n(K)`; always square.
pub type AlgebraElement = Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormSymmetry {
    Symmetric,
    Skew,
}

/// An involution of `M_n(K)`: transpose, or the adjoint `x* = B⁻¹ xᵀ B`
/// for a non-degenerate (skew-)symmetric form `B`.
#[derive(Debug, Clone, PartialEq)]
pub enum InvolutionSpec {
    Transpose,
    FormAdjoint { form: Matrix, form_inv: Matrix, symmetry: FormSymmetry },
}

impl InvolutionSpec {
    pub fn form_adjoint(form: Matrix, symmetry: FormSymmetry) -> Result<InvolutionSpec> {
        if !form.is_square() {
            return Err(Error::Shape("form must be square".into()));
        }
        let expected = match symmetry {
            FormSymmetry::Symmetric => form.clone(),
            FormSymmetry::Skew => -&form,
        };
        if form.transpose() != expected {
            return Err(Error::Invalid("form does not have the declared symmetry".into()));
        }
        let form_inv = form.inverse()?;
        Ok(InvolutionSpec::FormAdjoint { form, form_inv, symmetry })
    }

    /// Size constraint, if the involution carries a form.
    pub fn size(&self) -> Option<usize> {
        match self {
            InvolutionSpec::Transpose => None,
            InvolutionSpec::FormAdjoint { form, .. } => Some(form.rows()),
        }
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        match self {
            InvolutionSpec::Transpose => x.transpose(),
            InvolutionSpec::FormAdjoint { form, form_inv, .. } => {
                &(form_inv * &x.transpose()) * form
            }
        }
    }
}

pub fn involution_apply(inv: &InvolutionSpec, x: &AlgebraElement) -> AlgebraElement {
    inv.apply(x)
}

pub fn alg_invert(x: &AlgebraElement) -> Result<AlgebraElement> {
    x.inverse()
}

/// `(h, a)` with `h = (x + x*)/2` hermitian and `a = (x - x*)/2` anti-hermitian.
pub fn herm_split(inv: &InvolutionSpec, x: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    let xs = inv.apply(x);
    let half = x.zero_scalar().half_like();
    ((x + &xs).scale(&half), (x - &xs).scale(&half))
}

pub fn is_hermitian(inv: &InvolutionSpec, x: &AlgebraElement) -> bool {
    inv.apply(x) == *x
}

pub fn is_antihermitian(inv: &InvolutionSpec, x: &AlgebraElement) -> bool {
    inv.apply(x) == -x
}

/// `x* x = 1`.
pub fn is_unitary(inv: &InvolutionSpec, x: &AlgebraElement) -> bool {
    let one = Matrix::identity(&x.ring(), x.rows());
    &inv.apply(x) * x == one
}

/// A linear map given by its matrix on a fixed basis (the matrix units
/// `E_ij` in row-major order when acting on all of `A`).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    matrix: Matrix,
}

impl LinearOperator {
    pub fn new(matrix: Matrix) -> Result<LinearOperator> {
        if !matrix.is_square() {
            return Err(Error::Shape("operator matrix must be square".into()));
        }
        Ok(LinearOperator { matrix })
    }

    /// A map between spaces of different dimension, such as an off-diagonal
    /// grading block.
    pub fn rectangular(matrix: Matrix) -> LinearOperator {
        LinearOperator { matrix }
    }

    pub fn identity(ring: &RingDescriptor, dim: usize) -> LinearOperator {
        LinearOperator { matrix: Matrix::identity(ring, dim) }
    }

    pub fn scalar(s: &Scalar, dim: usize) -> LinearOperator {
        LinearOperator { matrix: Matrix::scalar(s, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Applies to a coordinate column vector.
    pub fn apply_coords(&self, v: &Matrix) -> Matrix {
        &self.matrix * v
    }

    /// Applies to an element of `A`, in matrix-unit coordinates.
    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.rows() * x.cols() != self.dim() {
            return Err(Error::Shape("operator/element dimension mismatch".into()));
        }
        self.apply_coords(&x.flatten()).unflatten(x.rows(), x.cols())
    }

    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator { matrix: &self.matrix * &other.matrix }
    }

    pub fn add(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator { matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator { matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, s: &Scalar) -> LinearOperator {
        LinearOperator { matrix: self.matrix.scale(s) }
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.is_invertible()
    }

    pub fn inverse(&self) -> Result<LinearOperator> {
        self.matrix
            .inverse()
            .map(|matrix| LinearOperator { matrix })
            .map_err(|_| Error::SingularOperator)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn agrees(&self, other: &LinearOperator, tol: f64) -> bool {
        self.matrix.agrees(&other.matrix, tol)
    }
}

impl<'a> Mul<&'a LinearOperator> for &'a LinearOperator {
    type Output = LinearOperator;
    fn mul(self, rhs: &'a LinearOperator) -> LinearOperator {
        self.compose(rhs)
    }
}

/// Materializes a linear map on `M_n(K)` by applying it to the matrix units.
pub fn op_from_action(
    ring: &RingDescriptor,
    n: usize,
    f: impl Fn(&AlgebraElement) -> Result<AlgebraElement>,
) -> Result<LinearOperator> {
    let dim = n * n;
    let mut columns = Vec::with_capacity(dim);
    let mut out_ring = ring.clone();
    for i in 0..n {
        for j in 0..n {
            let image = f(&Matrix::unit(ring, n, i, j))?;
            if image.rows() != n || image.cols() != n {
                return Err(Error::Shape("action must map M_n to M_n".into()));
            }
            out_ring = out_ring.join(&image.ring())?;
            columns.push(image.flatten());
        }
    }
    let matrix = Matrix::from_fn(dim, dim, |r, c| columns[c].get(r, 0).clone());
    LinearOperator::new(matrix.embed(&out_ring)?)
}

/// Solves `L(z) = y` for invertible `L` on `M_n(K)`.
pub fn op_solve(op: &LinearOperator, y: &AlgebraElement) -> Result<AlgebraElement> {
    if y.rows() * y.cols() != op.dim() {
        return Err(Error::Shape("operator/element dimension mismatch".into()));
    }
    op.matrix.solve(&y.flatten())?.unflatten(y.rows(), y.cols())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RingDescriptor {
        RingDescriptor::Rational
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&q(), rows)
    }

    #[test]
    fn invert_examples() {
        assert_eq!(alg_invert(&Matrix::identity(&q(), 2)).unwrap(), Matrix::identity(&q(), 2));
        assert_eq!(alg_invert(&m(&[&[1, 1], &[0, 1]])).unwrap(), m(&[&[1, -1], &[0, 1]]));
        assert_eq!(alg_invert(&m(&[&[1, 1], &[1, 1]])), Err(Error::NotInvertible));
    }

    #[test]
    fn involution_examples() {
        let e12 = Matrix::unit(&q(), 2, 0, 1);
        assert_eq!(InvolutionSpec::Transpose.apply(&e12), Matrix::unit(&q(), 2, 1, 0));

        let id_form =
            InvolutionSpec::form_adjoint(Matrix::identity(&q(), 2), FormSymmetry::Symmetric).unwrap();
        let x = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(id_form.apply(&x), x.transpose());

        let skew =
            InvolutionSpec::form_adjoint(m(&[&[0, 1], &[-1, 0]]), FormSymmetry::Skew).unwrap();
        assert_eq!(skew.apply(&m(&[&[5, 0], &[0, 7]])), m(&[&[7, 0], &[0, 5]]));
    }

    #[test]
    fn form_adjoint_validates_symmetry() {
        assert!(InvolutionSpec::form_adjoint(m(&[&[0, 1], &[-1, 0]]), FormSymmetry::Symmetric).is_err());
        assert!(InvolutionSpec::form_adjoint(m(&[&[1, 1], &[1, 1]]), FormSymmetry::Symmetric).is_err());
    }

    #[test]
    fn herm_split_examples() {
        let t = InvolutionSpec::Transpose;
        let sym = m(&[&[1, 2], &[2, 5]]);
        assert_eq!(herm_split(&t, &sym), (sym.clone(), Matrix::zeros(&q(), 2, 2)));

        let e12 = Matrix::unit(&q(), 2, 0, 1);
        let e21 = Matrix::unit(&q(), 2, 1, 0);
        let half = Scalar::rational(1, 2);
        let (h, a) = herm_split(&t, &e12);
        assert_eq!(h, (&e12 + &e21).scale(&half));
        assert_eq!(a, (&e12 - &e21).scale(&half));
        assert_eq!(&h + &a, e12);
    }

    #[test]
    fn op_from_action_examples() {
        let id = op_from_action(&q(), 2, |w| Ok(w.clone())).unwrap();
        assert_eq!(id, LinearOperator::identity(&q(), 4));

        let a = m(&[&[2, 0], &[0, 1]]);
        let op = op_from_action(&q(), 2, |w| Ok(&a * w)).unwrap();
        let diag: Vec<Scalar> = (0..4).map(|i| op.matrix().get(i, i).clone()).collect();
        assert_eq!(diag, [2, 2, 1, 1].map(Scalar::integer).to_vec());
        assert_eq!(op.matrix().rank(), 4);

        let e12 = Matrix::unit(&q(), 2, 0, 1);
        let nil = op_from_action(&q(), 2, |w| Ok(&e12 * w)).unwrap();
        assert_eq!(nil.rank(), 2);
        assert!(!nil.is_invertible());
    }

    #[test]
    fn op_solve_examples() {
        let y = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(op_solve(&LinearOperator::identity(&q(), 4), &y).unwrap(), y);
        let two = LinearOperator::scalar(&Scalar::integer(2), 4);
        assert_eq!(op_solve(&two, &y).unwrap(), y.scale(&Scalar::rational(1, 2)));

        let e12 = Matrix::unit(&q(), 2, 0, 1);
        let nil = op_from_action(&q(), 2, |w| Ok(&e12 * w)).unwrap();
        // image of w ↦ E12 w has zero second row; y does not.
        assert_eq!(op_solve(&nil, &y), Err(Error::SingularOperator));
    }
}
