//! The 3-graded Lie algebra `gl₂(A)`, its elementary group and the
//! denominator calculus giving the chart action `g.x = d_g(x)⁻¹ n_g(x)`.
//!
//! Elements of `gl₂(A)` are plain `2n × 2n` matrices `(a b; c d)` with
//! `g₁` the upper-right block, `g₀` the diagonal and `g₋₁` the lower-left.

use crate::algebra::{op_from_action, op_solve, AlgebraElement, LinearOperator};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::RingDescriptor;

/// An element of `gl₂(A)`.
pub type GradedElement = Matrix;

fn half_n(x: &Matrix) -> usize {
    assert!(x.is_square() && x.rows() % 2 == 0, "gl₂(A) elements are 2n×2n");
    x.rows() / 2
}

/// `x̂ = (0 x; 0 0) ∈ g₁`.
pub fn hat_plus(x: &AlgebraElement) -> GradedElement {
    let z = Matrix::zeros(&x.ring(), x.rows(), x.rows());
    Matrix::from_blocks(&z, x, &z, &z).expect("square blocks")
}

/// `ŷ = (0 0; y 0) ∈ g₋₁`.
pub fn hat_minus(y: &AlgebraElement) -> GradedElement {
    let z = Matrix::zeros(&y.ring(), y.rows(), y.rows());
    Matrix::from_blocks(&z, &z, y, &z).expect("square blocks")
}

pub fn hat_zero(a: &AlgebraElement, d: &AlgebraElement) -> GradedElement {
    let z = Matrix::zeros(&a.ring(), a.rows(), a.rows());
    Matrix::from_blocks(a, &z, &z, d).expect("square blocks")
}

/// Upper-right block.
pub fn pr_plus(x: &GradedElement) -> AlgebraElement {
    let n = half_n(x);
    x.block(0, n, n, n)
}

/// Lower-left block.
pub fn pr_minus(x: &GradedElement) -> AlgebraElement {
    let n = half_n(x);
    x.block(n, 0, n, n)
}

/// Diagonal blocks `(a, d)`.
pub fn pr_zero(x: &GradedElement) -> (AlgebraElement, AlgebraElement) {
    let n = half_n(x);
    (x.block(0, 0, n, n), x.block(n, n, n, n))
}

/// Euler element `E = ½·diag(1, -1)`.
pub fn euler(ring: &RingDescriptor, n: usize) -> GradedElement {
    let half = ring.one().half_like();
    let one = Matrix::scalar(&half, n);
    hat_zero(&one, &-&one)
}

pub fn ad_bracket(x: &GradedElement, y: &GradedElement) -> GradedElement {
    &(x * y) - &(y * x)
}

/// One elementary factor `exp(ad v̂)` of degree `±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub degree: i8,
    pub v: AlgebraElement,
}

impl Generator {
    pub fn matrix(&self) -> Matrix {
        let n = self.v.rows();
        let one = Matrix::identity(&self.v.ring(), n);
        let z = Matrix::zeros(&self.v.ring(), n, n);
        if self.degree > 0 {
            Matrix::from_blocks(&one, &self.v, &z, &one)
        } else {
            Matrix::from_blocks(&one, &z, &self.v, &one)
        }
        .expect("square blocks")
    }
}

/// An invertible `2 × 2` block matrix over `A`, with its inverse cached and
/// an optional word in elementary generators witnessing membership in `E₂(A)`.
#[derive(Debug, Clone)]
pub struct GroupElement {
    m: Matrix,
    inv: Matrix,
    word: Option<Vec<Generator>>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl GroupElement {
    pub fn new(m: Matrix) -> Result<GroupElement> {
        if !m.is_square() || m.rows() % 2 != 0 {
            return Err(Error::Shape("group elements are 2n×2n".into()));
        }
        let inv = m.inverse()?;
        Ok(GroupElement { m, inv, word: None })
    }

    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<GroupElement> {
        GroupElement::new(Matrix::from_blocks(a, b, c, d)?)
    }

    /// Product of elementary generators; the word is kept as a witness.
    pub fn from_word(ring: &RingDescriptor, n: usize, word: Vec<Generator>) -> Result<GroupElement> {
        let mut m = Matrix::identity(ring, 2 * n);
        for g in &word {
            if g.v.rows() != n || g.v.cols() != n || (g.degree != 1 && g.degree != -1) {
                return Err(Error::Invalid("generator must be n×n with degree ±1".into()));
            }
            m = &m * &g.matrix();
        }
        let mut g = GroupElement::new(m)?;
        g.word = Some(word);
        Ok(g)
    }

    pub fn identity(ring: &RingDescriptor, n: usize) -> GroupElement {
        let m = Matrix::identity(ring, 2 * n);
        GroupElement { inv: m.clone(), m, word: Some(Vec::new()) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inv
    }

    pub fn word(&self) -> Option<&[Generator]> {
        self.word.as_deref()
    }

    pub fn n(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn ring(&self) -> RingDescriptor {
        self.m.ring()
    }

    /// Blocks `(a, b, c, d)`.
    pub fn blocks(&self) -> (Matrix, Matrix, Matrix, Matrix) {
        let n = self.n();
        (
            self.m.block(0, 0, n, n),
            self.m.block(0, n, n, n),
            self.m.block(n, 0, n, n),
            self.m.block(n, n, n, n),
        )
    }

    pub fn inverse(&self) -> GroupElement {
        let word = self.word.as_ref().map(|w| {
            w.iter().rev().map(|g| Generator { degree: g.degree, v: -&g.v }).collect()
        });
        GroupElement { m: self.inv.clone(), inv: self.m.clone(), word }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        GroupElement { m: &self.m * &other.m, inv: &other.inv * &self.inv, word }
    }

    pub fn embed(&self, ring: &RingDescriptor) -> Result<GroupElement> {
        let word = match &self.word {
            Some(w) => Some(
                w.iter()
                    .map(|g| Ok(Generator { degree: g.degree, v: g.v.embed(ring)? }))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(GroupElement { m: self.m.embed(ring)?, inv: self.inv.embed(ring)?, word })
    }

    /// `Ad(g)X = gXg⁻¹`.
    pub fn ad(&self, x: &GradedElement) -> GradedElement {
        &(&self.m * x) * &self.inv
    }

    /// Whether the word, if any, multiplies out to the matrix.
    pub fn word_is_consistent(&self) -> bool {
        match &self.word {
            None => true,
            Some(w) => {
                let mut m = Matrix::identity(&self.m.ring(), self.m.rows());
                for g in w {
                    m = &m * &g.matrix();
                }
                m == self.m
            }
        }
    }
}

/// `exp(ad v̂)`: `(1 v; 0 1)` for degree `+1`, `(1 0; v 1)` for degree `-1`.
pub fn exp_ad(v: &AlgebraElement, degree: i8) -> Result<GroupElement> {
    if degree != 1 && degree != -1 {
        return Err(Error::Invalid("degree must be ±1".into()));
    }
    GroupElement::from_word(&v.ring(), v.rows(), vec![Generator { degree, v: v.clone() }])
}

fn degree_dim(n: usize, degree: i8) -> usize {
    if degree == 0 {
        2 * n * n
    } else {
        n * n
    }
}

fn degree_basis(ring: &RingDescriptor, n: usize, degree: i8, k: usize) -> GradedElement {
    let z = Matrix::zeros(ring, n, n);
    let u = Matrix::unit(ring, n, (k % (n * n)) / n, k % n);
    match degree {
        1 => hat_plus(&u),
        -1 => hat_minus(&u),
        _ if k < n * n => hat_zero(&u, &z),
        _ => hat_zero(&z, &u),
    }
}

fn degree_coords(x: &GradedElement, degree: i8) -> Matrix {
    match degree {
        1 => pr_plus(x).flatten(),
        -1 => pr_minus(x).flatten(),
        _ => {
            let (a, d) = pr_zero(x);
            a.flatten().vstack(&d.flatten()).expect("column vectors")
        }
    }
}

/// The `(i, j)` component of `Ad(g)`, mapping `g_j` into `g_i`.
pub fn grading_block(g: &GroupElement, i: i8, j: i8) -> Result<LinearOperator> {
    if ![i, j].iter().all(|d| (-1..=1).contains(d)) {
        return Err(Error::Invalid("degrees must lie in {-1, 0, 1}".into()));
    }
    let n = g.n();
    let ring = g.ring();
    let cols: Vec<Matrix> = (0..degree_dim(n, j))
        .map(|k| degree_coords(&g.ad(&degree_basis(&ring, n, j, k)), i))
        .collect();
    let m = Matrix::from_fn(degree_dim(n, i), cols.len(), |r, c| cols[c].get(r, 0).clone());
    Ok(LinearOperator::rectangular(m))
}

/// Denominator, co-denominator and nominator of `g` at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Denominators {
    pub d: LinearOperator,
    pub c: LinearOperator,
    pub n: AlgebraElement,
}

/// `d = (Ad(exp x̂)⁻¹ Ad(g)⁻¹)₁₁`, `c = (Ad(g) Ad(exp x̂))₋₁₋₁`,
/// `n = pr₁(Ad(exp x̂)⁻¹ Ad(g)⁻¹ E)`.
pub fn denominators(g: &GroupElement, x: &AlgebraElement) -> Result<Denominators> {
    let n = g.n();
    if x.rows() != n || x.cols() != n {
        return Err(Error::Shape("chart point size does not match the group element".into()));
    }
    let ring = g.ring().join(&x.ring())?;
    // h = exp(-x̂)·g⁻¹
    let h_inv = g.compose(&exp_ad(x, 1)?);
    let h = h_inv.inverse();
    let d = op_from_action(&ring, n, |w| Ok(pr_plus(&h.ad(&hat_plus(w)))))?;
    let c = op_from_action(&ring, n, |w| Ok(pr_minus(&h_inv.ad(&hat_minus(w)))))?;
    let nom = pr_plus(&h.ad(&euler(&ring, n)));
    Ok(Denominators { d, c, n: nom })
}

/// `g.x = d_g(x)⁻¹ n_g(x)`, defined when both denominators are invertible.
pub fn act(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    let den = denominators(g, x)?;
    if !den.d.is_invertible() || !den.c.is_invertible() {
        return Err(Error::NotInChart);
    }
    op_solve(&den.d, &den.n)
}

/// `(ax + b)(cx + d)⁻¹`.
pub fn act_fractional(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    let (a, b, c, d) = g.blocks();
    let den = &(&c * x) + &d;
    let den_inv = den.inverse().map_err(|_| Error::NotInChart)?;
    Ok(&(&(&a * x) + &b) * &den_inv)
}

/// `diag(a, d)`.
pub fn diagonal(a: &AlgebraElement, d: &AlgebraElement) -> Result<GroupElement> {
    let z = Matrix::zeros(&a.ring(), a.rows(), a.rows());
    GroupElement::from_blocks(a, &z, &z, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::JordanContext;
    use crate::scalar::Scalar;

    fn q() -> RingDescriptor {
        RingDescriptor::Rational
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&q(), rows)
    }

    #[test]
    fn bracket_examples() {
        let x = hat_plus(&m(&[&[1, 2], &[3, 4]]));
        assert!(ad_bracket(&x, &x).is_zero());
        let e = euler(&q(), 2);
        assert_eq!(ad_bracket(&e, &x), x);
        let y = hat_minus(&m(&[&[0, 1], &[5, -2]]));
        assert_eq!(ad_bracket(&e, &y), -&y);
        let xy = ad_bracket(&x, &y);
        assert!(pr_plus(&xy).is_zero() && pr_minus(&xy).is_zero());
    }

    #[test]
    fn exp_ad_examples() {
        let zero = Matrix::zeros(&q(), 2, 2);
        assert_eq!(exp_ad(&zero, 1).unwrap(), GroupElement::identity(&q(), 2));
        assert_eq!(exp_ad(&zero, -1).unwrap(), GroupElement::identity(&q(), 2));
        let x = m(&[&[1, -1], &[2, 0]]);
        let g = exp_ad(&x, 1).unwrap();
        let e = euler(&q(), 2);
        assert_eq!(g.ad(&e), &e - &hat_plus(&x));

        // Ad(exp x̂) = 1 + ad x̂ + ½ ad(x̂)².
        let probe = Matrix::from_i64(&q(), &[&[1, 2, 0, 1], &[0, 1, 3, 1], &[2, 1, 1, 0], &[1, 0, -1, 2]]);
        let xh = hat_plus(&x);
        let ad1 = ad_bracket(&xh, &probe);
        let ad2 = ad_bracket(&xh, &ad1);
        let half = Scalar::rational(1, 2);
        assert_eq!(g.ad(&probe), &(&probe + &ad1) + &ad2.scale(&half));
    }

    #[test]
    fn grading_block_examples() {
        let id = GroupElement::identity(&q(), 1);
        assert_eq!(grading_block(&id, 1, 1).unwrap(), LinearOperator::identity(&q(), 1));
        assert!(grading_block(&id, 1, -1).unwrap().matrix().is_zero());
        let g = diagonal(&m(&[&[2]]), &m(&[&[1]])).unwrap();
        assert_eq!(grading_block(&g, 1, 1).unwrap().matrix().get(0, 0), &Scalar::integer(2));

        // corner block of exp(x̂) is ½ad(x̂)²: ŵ ↦ -x w x in g₁.
        let x = m(&[&[3]]);
        let corner = grading_block(&exp_ad(&x, 1).unwrap(), 1, -1).unwrap();
        assert_eq!(corner.matrix().get(0, 0), &Scalar::integer(-9));
    }

    #[test]
    fn denominator_examples() {
        let x = m(&[&[1, 2], &[0, 1]]);
        let id = GroupElement::identity(&q(), 2);
        let den = denominators(&id, &x).unwrap();
        assert_eq!(den.d, LinearOperator::identity(&q(), 4));
        assert_eq!(den.c, LinearOperator::identity(&q(), 4));
        assert_eq!(den.n, x);

        let v = m(&[&[0, 1], &[1, 1]]);
        let den = denominators(&exp_ad(&v, 1).unwrap(), &x).unwrap();
        assert_eq!(den.d, LinearOperator::identity(&q(), 4));
        assert_eq!(den.n, &x + &v);

        let y = m(&[&[1, 0], &[-1, 2]]);
        let den = denominators(&exp_ad(&y, -1).unwrap(), &x).unwrap();
        assert_eq!(den.d, JordanContext::full(q(), 2).bergman_operator(&x, &y).unwrap());
    }

    #[test]
    fn act_examples() {
        let x = m(&[&[1, 2], &[0, 1]]);
        let v = m(&[&[0, 1], &[1, 1]]);
        assert_eq!(act(&exp_ad(&v, 1).unwrap(), &x).unwrap(), &x + &v);
        let g = exp_ad(&m(&[&[1]]), -1).unwrap();
        assert_eq!(act(&g, &m(&[&[1]])).unwrap().get(0, 0), &Scalar::rational(1, 2));
        let j = GroupElement::new(m(&[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(act(&j, &m(&[&[0]])), Err(Error::NotInChart));
        assert_eq!(act_fractional(&j, &m(&[&[0]])), Err(Error::NotInChart));
    }

    #[test]
    fn words_and_inverses() {
        let one = m(&[&[1]]);
        let word = vec![
            Generator { degree: 1, v: one.clone() },
            Generator { degree: -1, v: -&one },
            Generator { degree: 1, v: one.clone() },
        ];
        let j = GroupElement::from_word(&q(), 1, word).unwrap();
        assert_eq!(j.matrix(), &m(&[&[0, 1], &[-1, 0]]));
        assert!(j.inverse().word_is_consistent());
        assert!(j.compose(&j.inverse()).word_is_consistent());
        assert_eq!(j.compose(&j.inverse()), GroupElement::identity(&q(), 1));
    }
}
