//! The projective line over `A = M_n(K)`, realized as the Grassmannian of
//! `n`-dimensional subspaces of `K^{2n}`.
//!
//! A point is a `2n × n` matrix of full column rank, taken up to right
//! multiplication by `GL_n`. The chart `z ↦ Γ_z = [(z; 1)]` covers the points
//! transversal to `o⁺ = [(1; 0)]`, with `Γ_0 = o⁻ = [(0; 1)]`.

use crate::algebra::{AlgebraElement, InvolutionSpec};
use crate::error::{Error, Result};
use crate::lie3::{Generator, GroupElement};
use crate::matrix::Matrix;
use crate::scalar::{RingDescriptor, Scalar};

/// Tolerance used for point equality over floats.
pub const POINT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ProjectivePoint {
    rep: Matrix,
}

impl ProjectivePoint {
    pub fn new(rep: Matrix) -> Result<ProjectivePoint> {
        if rep.rows() != 2 * rep.cols() || rep.cols() == 0 {
            return Err(Error::Shape(format!("representative must be 2n×n, got {}x{}", rep.rows(), rep.cols())));
        }
        if rep.rank() != rep.cols() {
            return Err(Error::Invalid("representative does not have full column rank".into()));
        }
        Ok(ProjectivePoint { rep })
    }

    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.cols()
    }

    pub fn ring(&self) -> RingDescriptor {
        self.rep.ring()
    }

    pub fn embed(&self, ring: &RingDescriptor) -> Result<ProjectivePoint> {
        Ok(ProjectivePoint { rep: self.rep.embed(ring)? })
    }

    /// Coordinates `c` with `self.rep · c = v`, if `v`'s columns lie in the point.
    pub fn solve_in(&self, v: &Matrix) -> Option<Matrix> {
        let rows = self.rep.pivot_rows();
        let minor = self.rep.select_rows(&rows).inverse().ok()?;
        let c = &minor * &v.select_rows(&rows);
        (&self.rep * &c).agrees(v, POINT_TOLERANCE).then_some(c)
    }
}

/// Same column space. Over dual rings this is exact equality of submodules,
/// not just of their reductions.
impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.solve_in(&other.rep).is_some()
    }
}

pub fn o_plus(ring: &RingDescriptor, n: usize) -> ProjectivePoint {
    let rep = Matrix::identity(ring, n).vstack(&Matrix::zeros(ring, n, n)).expect("n columns");
    ProjectivePoint { rep }
}

pub fn o_minus(ring: &RingDescriptor, n: usize) -> ProjectivePoint {
    gamma_chart(&Matrix::zeros(ring, n, n))
}

/// `Γ_z = [(z; 1)]`.
pub fn gamma_chart(z: &AlgebraElement) -> ProjectivePoint {
    let one = Matrix::identity(&z.ring(), z.rows());
    ProjectivePoint { rep: z.vstack(&one).expect("square z") }
}

/// `P Q⁻¹` for `rep = (P; Q)`.
pub fn chart_coords(e: &ProjectivePoint) -> Result<AlgebraElement> {
    let n = e.n();
    let q = e.rep.block(n, 0, n, n).inverse().map_err(|_| Error::NotInChart)?;
    Ok(&e.rep.block(0, 0, n, n) * &q)
}

/// `E ⊕ F = K^{2n}`.
pub fn transversal(e: &ProjectivePoint, f: &ProjectivePoint) -> bool {
    e.n() == f.n() && e.rep.hstack(&f.rep).map(|m| m.is_invertible()).unwrap_or(false)
}

/// `[g · rep]`.
pub fn act_frac(g: &GroupElement, e: &ProjectivePoint) -> ProjectivePoint {
    ProjectivePoint { rep: g.matrix() * &e.rep }
}

/// Cayley matrix `C = (1 1; 1 -1)`.
pub fn cayley(ring: &RingDescriptor, n: usize) -> GroupElement {
    let one = Matrix::identity(ring, n);
    GroupElement::from_blocks(&one, &one, &one, &-&one).expect("C² = 2")
}

/// Flip `F = (0 1; 1 0)`.
pub fn flip(ring: &RingDescriptor, n: usize) -> GroupElement {
    let one = Matrix::identity(ring, n);
    let z = Matrix::zeros(ring, n, n);
    GroupElement::from_blocks(&z, &one, &one, &z).expect("F² = 1")
}

/// `I₁,₁ = diag(1, -1)`.
pub fn i11(ring: &RingDescriptor, n: usize) -> GroupElement {
    let one = Matrix::identity(ring, n);
    let z = Matrix::zeros(ring, n, n);
    GroupElement::from_blocks(&one, &z, &z, &-&one).expect("involution")
}

/// `J = (0 1; -1 0) = (1 1; 0 1)(1 0; -1 1)(1 1; 0 1)`, built from its word.
pub fn j_matrix(ring: &RingDescriptor, n: usize) -> GroupElement {
    let one = Matrix::identity(ring, n);
    let word = vec![
        Generator { degree: 1, v: one.clone() },
        Generator { degree: -1, v: -&one },
        Generator { degree: 1, v: one },
    ];
    GroupElement::from_word(ring, n, word).expect("elementary word")
}

/// `μ_r(x, a, y)`: on `K^{2n} = x ⊕ a`, fix the `x`-summand and scale the
/// `a`-summand by `r`, then take the image of `y`. In the chart with origin
/// `x` and `a` at infinity this is `z ↦ rz`.
pub fn mu_dilation(r: &Scalar, x: &ProjectivePoint, a: &ProjectivePoint, y: &ProjectivePoint) -> Result<ProjectivePoint> {
    if !transversal(x, a) || !transversal(y, a) {
        return Err(Error::NotTransversal);
    }
    let n = x.n();
    let frame = x.rep.hstack(&a.rep)?;
    let c = frame.solve(&y.rep).map_err(|_| Error::NotTransversal)?;
    let along_x = &x.rep * &c.block(0, 0, n, n);
    let along_a = (&a.rep * &c.block(n, 0, n, n)).scale(r);
    ProjectivePoint::new(&along_x + &along_a)
}

/// Block formula for `Φ_j`, `j ∈ {1, 2, 3, 4}`, on `2n × 2n` matrices.
pub fn phi_matrix(j: u8, inv: &InvolutionSpec, x: &Matrix) -> Result<Matrix> {
    let n = x.rows() / 2;
    if !x.is_square() || x.rows() % 2 != 0 {
        return Err(Error::Shape("Φ acts on 2n×2n matrices".into()));
    }
    let s = |r, c| inv.apply(&x.block(r * n, c * n, n, n));
    let (a, b, c, d) = (s(0, 0), s(0, 1), s(1, 0), s(1, 1));
    match j {
        1 => Matrix::from_blocks(&d, &-&b, &-&c, &a),
        2 => Matrix::from_blocks(&d, &b, &c, &a),
        3 => Matrix::from_blocks(&a, &-&c, &-&b, &d),
        4 => Matrix::from_blocks(&a, &c, &b, &d),
        _ => Err(Error::Invalid(format!("Φ index {j} not in 1..=4"))),
    }
}

/// A complement of `e` spanned by standard basis vectors, chosen greedily.
pub fn greedy_complement(e: &ProjectivePoint) -> ProjectivePoint {
    let n = e.n();
    let ring = e.ring();
    let aug = e.rep.hstack(&Matrix::identity(&ring, 2 * n)).expect("2n rows");
    let cols: Vec<usize> = aug.pivot_columns().into_iter().filter(|&c| c >= n).map(|c| c - n).collect();
    ProjectivePoint { rep: Matrix::identity(&ring, 2 * n).select_columns(&cols) }
}

/// `Φ̃_j(E) = ker Φ_j(p)` for the projection `p` onto `E` along `complement`.
pub fn phi_involution_with_complement(
    j: u8,
    inv: &InvolutionSpec,
    e: &ProjectivePoint,
    complement: &ProjectivePoint,
) -> Result<ProjectivePoint> {
    if !transversal(e, complement) {
        return Err(Error::NotTransversal);
    }
    let n = e.n();
    let frame = e.rep.hstack(&complement.rep)?;
    let ring = frame.ring();
    let mut diag = Matrix::zeros(&ring, 2 * n, 2 * n);
    diag.set_block(0, 0, &Matrix::identity(&ring, n));
    let p = &(&frame * &diag) * &frame.inverse()?;
    let kernel_proj = &Matrix::identity(&ring, 2 * n) - &phi_matrix(j, inv, &p)?;
    ProjectivePoint::new(kernel_proj.column_basis())
}

pub fn phi_involution(j: u8, inv: &InvolutionSpec, e: &ProjectivePoint) -> Result<ProjectivePoint> {
    phi_involution_with_complement(j, inv, e, &greedy_complement(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PointClass {
    pub hermitian: bool,
    pub antihermitian: bool,
    pub unitary: bool,
}

pub fn classify_point(inv: &InvolutionSpec, e: &ProjectivePoint) -> Result<PointClass> {
    Ok(PointClass {
        hermitian: phi_involution(1, inv, e)? == *e,
        antihermitian: phi_involution(2, inv, e)? == *e,
        unitary: phi_involution(3, inv, e)? == *e,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolarityMode {
    /// `E ↦ S·E`.
    Linear { s: GroupElement },
    /// `E ↦ S·Φ̃_j(E)`.
    Semilinear { j: u8, s: GroupElement, involution: InvolutionSpec },
}

/// A point map of order two. With a modification `H`, the matrix `S₀` is
/// replaced by `(0 H; H⁻¹ 0)·S₀`; for `H = 1` this is `F·S₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritySpec {
    pub mode: PolarityMode,
    pub h: Option<AlgebraElement>,
}

impl PolaritySpec {
    pub fn linear(s: GroupElement) -> PolaritySpec {
        PolaritySpec { mode: PolarityMode::Linear { s }, h: None }
    }

    pub fn semilinear(j: u8, s: GroupElement, involution: InvolutionSpec) -> PolaritySpec {
        PolaritySpec { mode: PolarityMode::Semilinear { j, s, involution }, h: None }
    }

    pub fn with_modification(mut self, h: AlgebraElement) -> PolaritySpec {
        self.h = Some(h);
        self
    }

    pub fn base_matrix(&self) -> &GroupElement {
        match &self.mode {
            PolarityMode::Linear { s } | PolarityMode::Semilinear { s, .. } => s,
        }
    }

    /// The effective matrix `S`, including the modification.
    pub fn matrix(&self) -> Result<GroupElement> {
        let s0 = self.base_matrix();
        match &self.h {
            None => Ok(s0.clone()),
            Some(h) => {
                let z = Matrix::zeros(&h.ring(), h.rows(), h.rows());
                let alpha = GroupElement::from_blocks(&z, h, &h.inverse()?, &z)?;
                Ok(alpha.compose(s0))
            }
        }
    }

    /// The same polarity with the modification folded into `S`.
    pub fn resolved(&self) -> Result<PolaritySpec> {
        let s = self.matrix()?;
        let mode = match &self.mode {
            PolarityMode::Linear { .. } => PolarityMode::Linear { s },
            PolarityMode::Semilinear { j, involution, .. } => {
                PolarityMode::Semilinear { j: *j, s, involution: involution.clone() }
            }
        };
        Ok(PolaritySpec { mode, h: None })
    }
}

pub fn polarity_apply(spec: &PolaritySpec, e: &ProjectivePoint) -> Result<ProjectivePoint> {
    let s = spec.matrix()?;
    match &spec.mode {
        PolarityMode::Linear { .. } => Ok(act_frac(&s, e)),
        PolarityMode::Semilinear { j, involution, .. } => Ok(act_frac(&s, &phi_involution(*j, involution, e)?)),
    }
}

/// `E ⊤ p(E)`.
pub fn nonisotropic(spec: &PolaritySpec, e: &ProjectivePoint) -> Result<bool> {
    Ok(transversal(e, &polarity_apply(spec, e)?))
}

/// A group element `g` with `g·Γ_0 = x` and `g·o⁺ = a`, for `x ⊤ a`.
pub fn frame(x: &ProjectivePoint, a: &ProjectivePoint) -> Result<GroupElement> {
    if !transversal(x, a) {
        return Err(Error::NotTransversal);
    }
    GroupElement::new(a.rep.hstack(&x.rep)?)
}

/// Affine chart with origin `x` and `a` at infinity.
#[derive(Debug, Clone)]
pub struct AffineChart {
    g: GroupElement,
}

impl AffineChart {
    pub fn new(origin: &ProjectivePoint, infinity: &ProjectivePoint) -> Result<AffineChart> {
        Ok(AffineChart { g: frame(origin, infinity)? })
    }

    /// The standard chart: origin `Γ_0`, infinity `o⁺`.
    pub fn standard(ring: &RingDescriptor, n: usize) -> AffineChart {
        AffineChart { g: GroupElement::identity(ring, n) }
    }

    pub fn coords(&self, e: &ProjectivePoint) -> Result<AlgebraElement> {
        chart_coords(&act_frac(&self.g.inverse(), e))
    }

    pub fn point(&self, z: &AlgebraElement) -> ProjectivePoint {
        act_frac(&self.g, &gamma_chart(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie3::act;

    fn q() -> RingDescriptor {
        RingDescriptor::Rational
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&q(), rows)
    }

    #[test]
    fn chart_examples() {
        assert_eq!(gamma_chart(&m(&[&[0]])), o_minus(&q(), 1));
        assert!(transversal(&gamma_chart(&m(&[&[7]])), &o_plus(&q(), 1)));
        let z = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(chart_coords(&gamma_chart(&z)).unwrap(), z);
        assert_eq!(chart_coords(&o_plus(&q(), 2)), Err(Error::NotInChart));
        let p = ProjectivePoint::new(m(&[&[2], &[4]])).unwrap();
        assert_eq!(chart_coords(&p).unwrap().get(0, 0), &Scalar::rational(1, 2));
    }

    #[test]
    fn transversality_examples() {
        assert!(transversal(&o_plus(&q(), 2), &o_minus(&q(), 2)));
        assert!(!transversal(&o_plus(&q(), 2), &o_plus(&q(), 2)));
        assert!(transversal(&gamma_chart(&m(&[&[1]])), &gamma_chart(&m(&[&[0]]))));
    }

    #[test]
    fn fractional_action_examples() {
        let z = m(&[&[2, 1], &[1, 1]]);
        let t = GroupElement::from_blocks(&m(&[&[1, 0], &[0, 1]]), &m(&[&[1, 0], &[0, 1]]), &m(&[&[0, 0], &[0, 0]]), &m(&[&[1, 0], &[0, 1]])).unwrap();
        let one = Matrix::identity(&q(), 2);
        assert_eq!(act_frac(&t, &gamma_chart(&z)), gamma_chart(&(&z + &one)));
        assert_eq!(act_frac(&flip(&q(), 2), &gamma_chart(&z)), gamma_chart(&z.inverse().unwrap()));
        assert_eq!(act_frac(&i11(&q(), 2), &gamma_chart(&z)), gamma_chart(&-&z));
    }

    #[test]
    fn standard_matrix_identities() {
        let c = cayley(&q(), 2);
        assert_eq!(c.compose(&c).matrix(), &Matrix::identity(&q(), 4).scale(&Scalar::integer(2)));
        assert_eq!(c.inverse().compose(&i11(&q(), 2)).compose(&c), flip(&q(), 2));
        let j = j_matrix(&q(), 2);
        assert!(j.word_is_consistent());
        assert_eq!(act_frac(&j, &o_plus(&q(), 2)), o_minus(&q(), 2));
        assert_eq!(act(&j, &Matrix::zeros(&q(), 2, 2)), Err(Error::NotInChart));
    }

    #[test]
    fn mu_examples() {
        let z = m(&[&[1, -2], &[0, 3]]);
        let r = Scalar::integer(3);
        let origin = o_minus(&q(), 2);
        let inf = o_plus(&q(), 2);
        assert_eq!(mu_dilation(&r, &origin, &inf, &gamma_chart(&z)).unwrap(), gamma_chart(&z.scale(&r)));
        let x = gamma_chart(&m(&[&[1, 0], &[1, 1]]));
        let a = gamma_chart(&m(&[&[0, 1], &[3, 0]]));
        let y = gamma_chart(&m(&[&[2, 2], &[0, 1]]));
        assert_eq!(mu_dilation(&Scalar::integer(1), &x, &a, &y).unwrap(), y);
        assert_eq!(mu_dilation(&Scalar::integer(-1), &x, &a, &x).unwrap(), x);
        assert_eq!(mu_dilation(&r, &x, &x, &y), Err(Error::NotTransversal));
    }

    #[test]
    fn phi_examples() {
        let t = InvolutionSpec::Transpose;
        let z = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(phi_involution(1, &t, &gamma_chart(&z)).unwrap(), gamma_chart(&z.transpose()));
        assert_eq!(phi_involution(1, &t, &o_plus(&q(), 1)).unwrap(), o_plus(&q(), 1));
        let p = gamma_chart(&z);
        assert_eq!(phi_involution(1, &t, &phi_involution(1, &t, &p).unwrap()).unwrap(), p);
        assert_eq!(phi_involution(3, &t, &o_plus(&q(), 1)).unwrap(), o_minus(&q(), 1));
    }

    #[test]
    fn classification_examples() {
        let t = InvolutionSpec::Transpose;
        let sym = classify_point(&t, &gamma_chart(&m(&[&[1, 2], &[2, 0]]))).unwrap();
        assert!(sym.hermitian && !sym.antihermitian);
        let rot = Matrix::from_rows(vec![
            vec![Scalar::rational(3, 5), Scalar::rational(-4, 5)],
            vec![Scalar::rational(4, 5), Scalar::rational(3, 5)],
        ])
        .unwrap();
        assert!(classify_point(&t, &gamma_chart(&rot)).unwrap().unitary);
        let skew = classify_point(&t, &gamma_chart(&m(&[&[0, 1], &[-1, 0]]))).unwrap();
        assert!(skew.antihermitian && !skew.hermitian);
    }

    #[test]
    fn polarity_examples() {
        let spec = PolaritySpec::linear(i11(&q(), 1));
        assert!(nonisotropic(&spec, &gamma_chart(&m(&[&[2]]))).unwrap());
        assert!(!nonisotropic(&spec, &gamma_chart(&m(&[&[0]]))).unwrap());
        let semi = PolaritySpec::semilinear(3, GroupElement::identity(&q(), 1), InvolutionSpec::Transpose);
        assert!(nonisotropic(&semi, &o_plus(&q(), 1)).unwrap());

        let s0 = i11(&q(), 2);
        let modified = PolaritySpec::linear(s0.clone()).with_modification(Matrix::identity(&q(), 2));
        let plain = PolaritySpec::linear(flip(&q(), 2).compose(&s0));
        let p = gamma_chart(&m(&[&[1, 2], &[0, 1]]));
        assert_eq!(polarity_apply(&modified, &p).unwrap(), polarity_apply(&plain, &p).unwrap());
    }

    #[test]
    fn affine_chart_round_trip() {
        let x = gamma_chart(&m(&[&[1, 0], &[1, 1]]));
        let a = gamma_chart(&m(&[&[0, 1], &[3, 0]]));
        let chart = AffineChart::new(&x, &a).unwrap();
        assert!(chart.coords(&x).unwrap().is_zero());
        let z = m(&[&[1, 1], &[0, 2]]);
        assert_eq!(chart.coords(&chart.point(&z)).unwrap(), z);
        assert_eq!(chart.coords(&a), Err(Error::NotInChart));
    }
}
