//! Jordan structure on `V ⊆ M_n(K)`: the full algebra, or the hermitian or
//! anti-hermitian part for an involution.
//!
//! Operators on `V` are represented on a basis of `V`, so for the subspace
//! flavors they are `k × k` with `k = n(n ± 1)/2` rather than `n² × n²`.
//! Bergman operators and quasi-inverses follow the ad-convention: they are
//! what conjugation in `gl₂(A)` produces, `B(x, y)z = (1 + xy)z(1 + yx)`.
//! The `loos_*` variants flip the sign of the second argument.

use crate::algebra::{op_from_action, AlgebraElement, InvolutionSpec, LinearOperator};
use crate::error::{Error, Result};
use crate::lie3::{ad_bracket, hat_minus, hat_plus, pr_plus};
use crate::matrix::Matrix;
use crate::scalar::RingDescriptor;

/// Tolerance for subspace membership over floats.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Flavor {
    Full,
    Hermitian(InvolutionSpec),
    Antihermitian(InvolutionSpec),
}

impl Flavor {
    pub fn involution(&self) -> Option<&InvolutionSpec> {
        match self {
            Flavor::Full => None,
            Flavor::Hermitian(i) | Flavor::Antihermitian(i) => Some(i),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Full => "full",
            Flavor::Hermitian(_) => "hermitian",
            Flavor::Antihermitian(_) => "antihermitian",
        }
    }
}

/// Representation operators of `x` (and optionally of the pair `(x, y)`).
#[derive(Debug, Clone, PartialEq)]
pub struct RepOperators {
    /// `L(x)`; absent on the anti-hermitian flavor, which is not product-closed.
    pub l: Option<LinearOperator>,
    pub q: LinearOperator,
    /// `Q(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub q_xy: Option<LinearOperator>,
}

#[derive(Debug, Clone)]
pub struct JordanContext {
    n: usize,
    ring: RingDescriptor,
    flavor: Flavor,
    /// Columns are flattened basis elements of `V`.
    basis: Matrix,
    /// Rows of `basis` forming an invertible minor, and that minor's inverse.
    coord_rows: Vec<usize>,
    coord_inv: Matrix,
}

impl PartialEq for JordanContext {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ring == other.ring && self.flavor == other.flavor
    }
}

impl JordanContext {
    pub fn new(ring: RingDescriptor, n: usize, flavor: Flavor) -> Result<JordanContext> {
        if n == 0 {
            return Err(Error::Shape("n must be positive".into()));
        }
        if let Some(size) = flavor.involution().and_then(InvolutionSpec::size) {
            if size != n {
                return Err(Error::Shape(format!("involution form is {size}x{size}, algebra is {n}x{n}")));
            }
        }
        let basis = match flavor.involution() {
            None => Matrix::identity(&ring, n * n),
            Some(inv) => {
                let sign = matches!(flavor, Flavor::Hermitian(_));
                let half = ring.from_ratio(1, 2)?;
                let proj = op_from_action(&ring, n, |w| {
                    let s = inv.apply(w);
                    Ok(if sign { w + &s } else { w - &s }.scale(&half))
                })?;
                proj.matrix().column_basis()
            }
        };
        let coord_rows = basis.pivot_rows();
        let coord_inv = basis.select_rows(&coord_rows).inverse()?;
        Ok(JordanContext { n, ring, flavor, basis, coord_rows, coord_inv })
    }

    pub fn full(ring: RingDescriptor, n: usize) -> JordanContext {
        JordanContext::new(ring, n, Flavor::Full).expect("full context is always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    /// Dimension of `V` over `K`.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// The `i`-th basis element of `V`.
    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        self.basis.column(i).unflatten(self.n, self.n).expect("basis column has n² entries")
    }

    pub fn one(&self) -> AlgebraElement {
        Matrix::identity(&self.ring, self.n)
    }

    /// Coordinates of `x ∈ V` on the basis, as a column.
    pub fn coords(&self, x: &AlgebraElement) -> Result<Matrix> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(Error::Shape(format!("expected a {0}x{0} element", self.n)));
        }
        let flat = x.flatten();
        let c = &self.coord_inv * &flat.select_rows(&self.coord_rows);
        if (&self.basis * &c).agrees(&flat, MEMBERSHIP_TOLERANCE) {
            Ok(c)
        } else {
            Err(Error::NotInSubspace)
        }
    }

    pub fn element(&self, coords: &Matrix) -> Result<AlgebraElement> {
        (&self.basis * coords).unflatten(self.n, self.n)
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        self.coords(x).is_ok()
    }

    fn check(&self, xs: &[&AlgebraElement]) -> Result<()> {
        xs.iter().try_for_each(|x| self.coords(x).map(|_| ()))
    }

    /// Materializes a map `V → V` on the basis of `V`.
    pub fn operator(&self, f: impl Fn(&AlgebraElement) -> Result<AlgebraElement>) -> Result<LinearOperator> {
        let mut columns = Vec::with_capacity(self.dim());
        let mut ring = self.ring.clone();
        for i in 0..self.dim() {
            let image = f(&self.basis_element(i))?;
            ring = ring.join(&image.ring())?;
            columns.push(self.coords(&image)?);
        }
        let k = self.dim();
        let m = Matrix::from_fn(k, k, |r, c| columns[c].get(r, 0).clone());
        LinearOperator::new(m.embed(&ring)?)
    }

    /// Applies an operator on `V` to an element of `V`.
    pub fn apply(&self, op: &LinearOperator, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.element(&op.apply_coords(&self.coords(x)?))
    }

    /// Solves `op(z) = y` within `V`.
    pub fn solve(&self, op: &LinearOperator, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.element(&op.matrix().solve(&self.coords(y)?)?)
    }

    fn require_product(&self) -> Result<()> {
        match self.flavor {
            Flavor::Antihermitian(_) => Err(Error::UnsupportedFlavor("anti-hermitian part is not closed under the Jordan product")),
            _ => Ok(()),
        }
    }

    /// `x • y = (xy + yx)/2`.
    pub fn jordan_product(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.require_product()?;
        self.check(&[x, y])?;
        Ok(sym_product(x, y))
    }

    pub fn rep_operators(&self, x: &AlgebraElement, y: Option<&AlgebraElement>) -> Result<RepOperators> {
        self.check(&[x])?;
        if let Some(y) = y {
            self.check(&[y])?;
        }
        let l = match self.flavor {
            Flavor::Antihermitian(_) => None,
            _ => Some(self.l_op(x)?),
        };
        let q = self.q_op(x)?;
        let q_xy = match y {
            Some(y) => {
                let sum = x + y;
                Some(self.q_op(&sum)?.sub(&q).sub(&self.q_op(y)?))
            }
            None => None,
        };
        Ok(RepOperators { l, q, q_xy })
    }

    fn l_op(&self, x: &AlgebraElement) -> Result<LinearOperator> {
        self.operator(|w| Ok(sym_product(x, w)))
    }

    /// `Q(x) = 2L(x)² - L(x²)`, or `½T(x, ·, x)` where `L` is unavailable.
    fn q_op(&self, x: &AlgebraElement) -> Result<LinearOperator> {
        match self.flavor {
            Flavor::Antihermitian(_) => {
                let half = x.zero_scalar().half_like();
                self.operator(|w| Ok(triple(x, w, x).scale(&half)))
            }
            _ => {
                let l = self.l_op(x)?;
                let l_sq = self.l_op(&sym_product(x, x))?;
                let two = x.zero_scalar().from_i64_like(2);
                Ok(l.compose(&l).scale(&two).sub(&l_sq))
            }
        }
    }

    /// `x⁻¹ = Q(x)⁻¹ x`.
    pub fn jordan_inverse(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.require_product()?;
        let q = self.rep_operators(x, None)?.q;
        self.solve(&q, x).map_err(|e| match e {
            Error::SingularOperator => Error::NotInvertible,
            other => other,
        })
    }

    /// `T(x, y, z) = xyz + zyx`.
    pub fn triple_product(&self, x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(&[x, y, z])?;
        Ok(triple(x, y, z))
    }

    /// `id + ad(x̂)ad(ŷ) + ¼ad(x̂)²ad(ŷ)²` on `g₁ ≅ V`, evaluated in `gl₂(A)`.
    pub fn bergman_operator(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<LinearOperator> {
        self.check(&[x, y])?;
        let xh = hat_plus(x);
        let yh = hat_minus(y);
        let quarter = x.zero_scalar().half_like() * x.zero_scalar().half_like();
        self.operator(|z| {
            let zh = hat_plus(z);
            let ady = ad_bracket(&yh, &zh);
            let once = ad_bracket(&xh, &ady);
            let ady2 = ad_bracket(&yh, &ady);
            let twice = ad_bracket(&xh, &ad_bracket(&xh, &ady2));
            Ok(&(z + &pr_plus(&once)) + &pr_plus(&twice).scale(&quarter))
        })
    }

    /// The closed form `z ↦ (1 + xy)z(1 + yx)`.
    pub fn bergman_associative(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<LinearOperator> {
        self.check(&[x, y])?;
        let one = Matrix::identity(&x.ring(), self.n);
        let left = &one + &(x * y);
        let right = &one + &(y * x);
        self.operator(|z| Ok(&(&left * z) * &right))
    }

    pub fn is_quasi_invertible(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<bool> {
        Ok(self.bergman_operator(x, y)?.is_invertible() && self.bergman_operator(y, x)?.is_invertible())
    }

    /// `x^y = B(x, y)⁻¹(x + Q(x)y)`.
    pub fn quasi_inverse(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let b = self.bergman_operator(x, y)?;
        if !b.is_invertible() || !self.bergman_operator(y, x)?.is_invertible() {
            return Err(Error::NotQuasiInvertible);
        }
        let half = x.zero_scalar().half_like();
        let numerator = x + &triple(x, y, x).scale(&half);
        self.solve(&b, &numerator)
    }

    pub fn loos_bergman(&self, x: &AlgebraElement, w: &AlgebraElement) -> Result<LinearOperator> {
        self.bergman_operator(x, &-w)
    }

    pub fn loos_quasi_inverse(&self, x: &AlgebraElement, w: &AlgebraElement) -> Result<AlgebraElement> {
        self.quasi_inverse(x, &-w)
    }
}

fn sym_product(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let half = x.zero_scalar().half_like();
    (&(x * y) + &(y * x)).scale(&half)
}

fn triple(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> AlgebraElement {
    &(&(x * y) * z) + &(&(z * y) * x)
}
