//! Symmetric spaces `(M, m)` in three guises: invertible Jordan elements with
//! `m(x, y) = Q(x)y⁻¹`, non-isotropic points of a polarity with
//! `m(x, y) = μ₋₁(x, p(x), y)`, and groups with `m(x, y) = xy⁻¹x`.
//!
//! Tangent vectors are chart coordinates: ambient matrix coordinates for the
//! element-valued spaces, and the affine chart with origin `o` and `p(o)` at
//! infinity for the projective one.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{op_from_action, AlgebraElement, InvolutionSpec, LinearOperator};
use crate::calculus::{bracket_field, eps_part, lie_bracket_fields, lift, MapHandle};
use crate::error::{Error, Result};
use crate::jordan::{Flavor, JordanContext};
use crate::lie3::{hat_plus, pr_minus, pr_plus, GradedElement};
use crate::matrix::Matrix;
use crate::projline::{
    mu_dilation, nonisotropic, o_minus, o_plus, phi_matrix, polarity_apply, AffineChart, PolarityMode,
    PolaritySpec, ProjectivePoint, POINT_TOLERANCE,
};
use crate::scalar::{RingDescriptor, Scalar};

/// Default truncation order for the `tanh` series.
pub const DEFAULT_SERIES_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum GroupKind {
    FullLinear,
    Unitary(InvolutionSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceVariant {
    JordanUnits(JordanContext),
    Projective { spec: PolaritySpec, base: ProjectivePoint },
    Group(GroupKind),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpacePoint {
    Element(AlgebraElement),
    Projective(ProjectivePoint),
}

impl SpacePoint {
    pub fn element(&self) -> Result<&AlgebraElement> {
        match self {
            SpacePoint::Element(x) => Ok(x),
            SpacePoint::Projective(_) => Err(Error::Invalid("expected a matrix point".into())),
        }
    }

    pub fn projective(&self) -> Result<&ProjectivePoint> {
        match self {
            SpacePoint::Projective(p) => Ok(p),
            SpacePoint::Element(_) => Err(Error::Invalid("expected a projective point".into())),
        }
    }

    pub fn ring(&self) -> RingDescriptor {
        match self {
            SpacePoint::Element(x) => x.ring(),
            SpacePoint::Projective(p) => p.ring(),
        }
    }
}

/// Coordinates near a point.
#[derive(Debug, Clone)]
pub enum Chart {
    Ambient,
    Affine(AffineChart),
}

impl Chart {
    pub fn coords(&self, p: &SpacePoint) -> Result<Matrix> {
        match (self, p) {
            (Chart::Ambient, SpacePoint::Element(x)) => Ok(x.clone()),
            (Chart::Affine(c), SpacePoint::Projective(e)) => c.coords(e),
            _ => Err(Error::Invalid("chart and point kinds differ".into())),
        }
    }

    pub fn point(&self, z: &Matrix) -> SpacePoint {
        match self {
            Chart::Ambient => SpacePoint::Element(z.clone()),
            Chart::Affine(c) => SpacePoint::Projective(c.point(z)),
        }
    }
}

/// A map `M → M`, such as `σ_x`, `Q(x)` or a transvection.
#[derive(Clone)]
pub struct Transformation(Arc<dyn Fn(&SpacePoint) -> Result<SpacePoint> + Send + Sync>);

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Transformation")
    }
}

impl Transformation {
    pub fn apply(&self, p: &SpacePoint) -> Result<SpacePoint> {
        (self.0)(p)
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricSpace {
    variant: SpaceVariant,
    ring: RingDescriptor,
    n: usize,
    base: SpacePoint,
    chart: Chart,
}

impl SymmetricSpace {
    pub fn new(variant: SpaceVariant, ring: RingDescriptor, n: usize) -> Result<SymmetricSpace> {
        let (base, chart) = match &variant {
            SpaceVariant::JordanUnits(ctx) => {
                if ctx.n() != n {
                    return Err(Error::Shape("Jordan context size differs from n".into()));
                }
                (SpacePoint::Element(Matrix::identity(&ring, n)), Chart::Ambient)
            }
            SpaceVariant::Group(_) => (SpacePoint::Element(Matrix::identity(&ring, n)), Chart::Ambient),
            SpaceVariant::Projective { spec, base } => {
                if base.n() != n {
                    return Err(Error::Shape("base point size differs from n".into()));
                }
                let far = polarity_apply(spec, base)?;
                let chart = AffineChart::new(base, &far).map_err(|_| Error::NotInSpace)?;
                (SpacePoint::Projective(base.clone()), Chart::Affine(chart))
            }
        };
        let space = SymmetricSpace { variant, ring, n, base, chart };
        if !space.contains(&space.base)? {
            return Err(Error::NotInSpace);
        }
        Ok(space)
    }

    pub fn jordan_units(ctx: JordanContext) -> Result<SymmetricSpace> {
        let (ring, n) = (ctx.ring().clone(), ctx.n());
        SymmetricSpace::new(SpaceVariant::JordanUnits(ctx), ring, n)
    }

    pub fn projective(spec: PolaritySpec, base: ProjectivePoint) -> Result<SymmetricSpace> {
        let (ring, n) = (base.ring(), base.n());
        SymmetricSpace::new(SpaceVariant::Projective { spec, base }, ring, n)
    }

    pub fn group(kind: GroupKind, ring: RingDescriptor, n: usize) -> Result<SymmetricSpace> {
        SymmetricSpace::new(SpaceVariant::Group(kind), ring, n)
    }

    pub fn variant(&self) -> &SpaceVariant {
        &self.variant
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_point(&self) -> &SpacePoint {
        &self.base
    }

    /// The chart used for tangent vectors and vector fields.
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Chart coordinates of the base point.
    pub fn origin(&self) -> Matrix {
        self.chart.coords(&self.base).expect("base lies in its own chart")
    }

    /// A chart centred at `x`: ambient, or origin `x` with `p(x)` at infinity.
    pub fn chart_at(&self, x: &SpacePoint) -> Result<Chart> {
        match (&self.variant, x) {
            (SpaceVariant::Projective { spec, .. }, SpacePoint::Projective(e)) => {
                let far = polarity_apply(spec, e)?;
                Ok(Chart::Affine(AffineChart::new(e, &far).map_err(|_| Error::NotInSpace)?))
            }
            (SpaceVariant::Projective { .. }, _) => Err(Error::NotInSpace),
            _ => Ok(Chart::Ambient),
        }
    }

    pub fn contains(&self, p: &SpacePoint) -> Result<bool> {
        match (&self.variant, p) {
            (SpaceVariant::JordanUnits(ctx), SpacePoint::Element(x)) => {
                Ok(ctx.contains(x) && ctx.rep_operators(x, None)?.q.is_invertible())
            }
            (SpaceVariant::Group(kind), SpacePoint::Element(x)) => Ok(x.rows() == self.n
                && x.is_invertible()
                && match kind {
                    GroupKind::FullLinear => true,
                    GroupKind::Unitary(inv) => {
                        (&inv.apply(x) * x).agrees(&Matrix::identity(&x.ring(), self.n), POINT_TOLERANCE)
                    }
                }),
            (SpaceVariant::Projective { spec, .. }, SpacePoint::Projective(e)) => {
                Ok(e.n() == self.n && nonisotropic(spec, e)?)
            }
            _ => Ok(false),
        }
    }

    fn require(&self, p: &SpacePoint) -> Result<()> {
        if self.contains(p)? {
            Ok(())
        } else {
            Err(Error::NotInSpace)
        }
    }

    pub fn sym_mul(&self, x: &SpacePoint, y: &SpacePoint) -> Result<SpacePoint> {
        self.require(x)?;
        self.require(y)?;
        match &self.variant {
            SpaceVariant::JordanUnits(ctx) => {
                let (x, y) = (x.element()?, y.element()?);
                let q = ctx.rep_operators(x, None)?.q;
                let y_inv = ctx.jordan_inverse(y).map_err(|_| Error::NotInSpace)?;
                Ok(SpacePoint::Element(ctx.apply(&q, &y_inv)?))
            }
            SpaceVariant::Group(_) => {
                let (x, y) = (x.element()?, y.element()?);
                let y_inv = y.inverse().map_err(|_| Error::NotInSpace)?;
                Ok(SpacePoint::Element(&(x * &y_inv) * x))
            }
            SpaceVariant::Projective { spec, .. } => {
                let (x, y) = (x.projective()?, y.projective()?);
                let far = polarity_apply(spec, x)?;
                let minus_one = -x.rep().one_scalar();
                Ok(SpacePoint::Projective(mu_dilation(&minus_one, x, &far, y)?))
            }
        }
    }

    /// `σ_x = m(x, ·)`.
    pub fn sigma(&self, x: &SpacePoint) -> Transformation {
        let (space, x) = (self.clone(), x.clone());
        Transformation(Arc::new(move |y| space.sym_mul(&x, y)))
    }

    /// `Q(x) = σ_x σ_o`.
    pub fn quadratic_rep_point(&self, x: &SpacePoint) -> Transformation {
        let o = self.base.clone();
        self.transvection(x, &o)
    }

    /// `σ_x σ_y`.
    pub fn transvection(&self, x: &SpacePoint, y: &SpacePoint) -> Transformation {
        let (space, x, y) = (self.clone(), x.clone(), y.clone());
        Transformation(Arc::new(move |z| space.sym_mul(&x, &space.sym_mul(&y, z)?)))
    }

    /// `ṽ(p) = ½·Tm(v, 0_{m(o,p)})`, in chart coordinates.
    pub fn tilde_field(&self, v: &Matrix, p: &Matrix) -> Result<Matrix> {
        let lifted = lift(&self.origin(), v, &p.ring())?;
        let ring = lifted.ring();
        let o_eps = self.chart.point(&lifted);
        let mirrored = self.sym_mul(&self.base, &self.chart.point(p))?;
        let out = self.chart.coords(&self.sym_mul(&o_eps, &mirrored)?)?;
        let eps = eps_part(&out, &ring)?;
        let half = eps.zero_scalar().half_like();
        Ok(eps.scale(&half))
    }

    /// `ṽ` as a chart vector field.
    pub fn tilde_handle(&self, v: &Matrix) -> MapHandle {
        let (space, v) = (self.clone(), v.clone());
        MapHandle::unary("tilde", move |p| space.tilde_field(&v, p))
    }

    /// `[[ũ, ṽ], w̃](o)` with the chart bracket, using nested dual numbers.
    pub fn lts_numeric(&self, u: &Matrix, v: &Matrix, w: &Matrix) -> Result<Matrix> {
        let uv = bracket_field(&self.tilde_handle(u), &self.tilde_handle(v));
        lie_bracket_fields(&uv, &self.tilde_handle(w), &self.origin())
    }

    /// Closed-form Lie triple bracket at `o`.
    pub fn lts_bracket(&self, u: &Matrix, v: &Matrix, w: &Matrix) -> Result<Matrix> {
        match &self.variant {
            SpaceVariant::JordanUnits(ctx) => {
                let vw = ctx.jordan_product(v, w)?;
                let uw = ctx.jordan_product(u, w)?;
                Ok(&ctx.jordan_product(u, &vw)? - &ctx.jordan_product(v, &uw)?)
            }
            SpaceVariant::Group(_) => {
                let uv = &(u * v) - &(v * u);
                let quarter = u.zero_scalar().half_like() * u.zero_scalar().half_like();
                Ok((&(&uv * w) - &(w * &uv)).scale(&quarter))
            }
            SpaceVariant::Projective { .. } => {
                let theta = self.grading_reversal()?;
                Ok(&theta.triple(u, v, w)? - &theta.triple(v, u, w)?)
            }
        }
    }

    /// The involution `θ` of `gl₂(A)` behind a projective space based at `Γ_0`.
    pub fn grading_reversal(&self) -> Result<Theta> {
        let SpaceVariant::Projective { spec, base } = &self.variant else {
            return Err(Error::UnsupportedContext("closed forms need a projective space"));
        };
        if *base != o_minus(&self.ring, self.n) {
            return Err(Error::UnsupportedContext("closed forms need the base point Γ_0"));
        }
        let theta = Theta { spec: spec.resolved()? };
        for k in 0..self.n * self.n {
            let probe = hat_plus(&Matrix::unit(&self.ring, self.n, k / self.n, k % self.n));
            let image = theta.apply(&probe)?;
            if !(&image - &crate::lie3::hat_minus(&pr_minus(&image))).is_zero() {
                return Err(Error::UnsupportedContext("polarity does not reverse the grading"));
            }
        }
        Ok(theta)
    }

    /// `Exp(v) = Γ(cosh_N(v)⁻¹ sinh_N(v))` with `Q(v)w = ½T(v, w, v)`.
    pub fn exp_tanh(&self, v: &Matrix, order: usize) -> Result<SpacePoint> {
        if !matches!(self.ring, RingDescriptor::Float64 | RingDescriptor::Rational) {
            return Err(Error::UnsupportedContext("series exponential needs rational or float64 scalars"));
        }
        if order == 0 {
            return Err(Error::Invalid("series order must be at least 1".into()));
        }
        let theta = self.grading_reversal()?;
        let half = v.zero_scalar().half_like();
        let qv = op_from_action(&v.ring(), self.n, |w| Ok(theta.triple(v, w, v)?.scale(&half)))?;
        let dim = self.n * self.n;
        let mut cosh = LinearOperator::scalar(&Scalar::zero_like(&v.zero_scalar()), dim);
        let mut sinh = Matrix::zeros(&v.ring(), self.n, self.n);
        let mut power = LinearOperator::identity(&v.ring(), dim);
        let mut fact = v.one_scalar();
        for k in 0..=order {
            if k > 0 {
                power = power.compose(&qv);
                fact = fact * v.zero_scalar().from_i64_like((2 * k - 1) as i64) * v.zero_scalar().from_i64_like((2 * k) as i64);
            }
            // fact = (2k)!
            let inv_even = fact.inv()?;
            let inv_odd = (&fact * &v.zero_scalar().from_i64_like((2 * k + 1) as i64)).inv()?;
            cosh = cosh.add(&power.scale(&inv_even));
            sinh = &sinh + &power.apply(v)?.scale(&inv_odd);
        }
        let z = crate::algebra::op_solve(&cosh, &sinh).map_err(|_| Error::SeriesNotInvertible)?;
        Ok(SpacePoint::Projective(crate::projline::gamma_chart(&z)))
    }
}

/// A grading-reversing involution `θ` of `gl₂(A)`: `Y ↦ SYS⁻¹`, or
/// `Y ↦ -SΦ_j(Y)S⁻¹` for semilinear polarities.
#[derive(Debug, Clone)]
pub struct Theta {
    spec: PolaritySpec,
}

impl Theta {
    pub fn apply(&self, y: &GradedElement) -> Result<GradedElement> {
        match &self.spec.mode {
            PolarityMode::Linear { s } => Ok(s.ad(y)),
            PolarityMode::Semilinear { j, s, involution } => Ok(-&s.ad(&phi_matrix(*j, involution, y)?)),
        }
    }

    /// `T_θ(x, y, z) = pr₁[[x̂, θ(ŷ)], ẑ]`.
    pub fn triple(&self, x: &Matrix, y: &Matrix, z: &Matrix) -> Result<Matrix> {
        let xh = hat_plus(x);
        let yt = self.apply(&hat_plus(y))?;
        let inner = &(&xh * &yt) - &(&yt * &xh);
        let zh = hat_plus(z);
        Ok(pr_plus(&(&(&inner * &zh) - &(&zh * &inner))))
    }
}

/// The standard Jordan-unit space of `Herm(M_n, ι)` or of `M_n`.
pub fn jordan_units_for(ring: RingDescriptor, n: usize, flavor: Flavor) -> Result<SymmetricSpace> {
    SymmetricSpace::jordan_units(JordanContext::new(ring, n, flavor)?)
}

/// `M^(p)` for the flip polarity `F`, based at `Γ_0`.
pub fn flip_space(ring: &RingDescriptor, n: usize) -> SymmetricSpace {
    let spec = PolaritySpec::linear(crate::projline::flip(ring, n));
    SymmetricSpace::projective(spec, o_minus(ring, n)).expect("Γ_0 ⊤ o⁺")
}

/// Whether `o⁺` is the far point of the base chart.
pub fn is_standard_chart(space: &SymmetricSpace) -> bool {
    match &space.variant {
        SpaceVariant::Projective { spec, base } => {
            polarity_apply(spec, base).map(|p| p == o_plus(&space.ring, space.n)).unwrap_or(false)
        }
        _ => false,
    }
}
