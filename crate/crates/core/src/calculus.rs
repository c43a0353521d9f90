//! Difference quotients, dual-number differentials and the chart-level
//! Lie bracket of vector fields.
//!
//! Derivatives are exact: `df(x)v` is the ε-part of `f(x + εv)` with a fresh
//! outermost ε layer, so derivatives of derivatives simply nest.

use std::fmt;
use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::jordan::JordanContext;
use crate::lie3::{act, GroupElement};
use crate::matrix::Matrix;
use crate::scalar::{RingDescriptor, Scalar};

type Evaluator = dyn Fn(&[Matrix]) -> Result<Matrix> + Send + Sync;

/// A named chart-level map, generic over the scalar ring.
#[derive(Clone)]
pub struct MapHandle {
    name: String,
    arity: usize,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for MapHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MapHandle({}/{})", self.name, self.arity)
    }
}

impl MapHandle {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        eval: impl Fn(&[Matrix]) -> Result<Matrix> + Send + Sync + 'static,
    ) -> MapHandle {
        MapHandle { name: name.into(), arity, eval: Arc::new(eval) }
    }

    /// A unary map.
    pub fn unary(name: impl Into<String>, f: impl Fn(&Matrix) -> Result<Matrix> + Send + Sync + 'static) -> MapHandle {
        MapHandle::new(name, 1, move |args: &[Matrix]| f(&args[0]))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[Matrix]) -> Result<Matrix> {
        if args.len() != self.arity {
            return Err(Error::Invalid(format!("{} expects {} arguments, got {}", self.name, self.arity, args.len())));
        }
        (self.eval)(args)
    }

    pub fn call(&self, x: &Matrix) -> Result<Matrix> {
        self.eval(std::slice::from_ref(x))
    }

    /// `self ∘ inner` for unary maps.
    pub fn compose(&self, inner: &MapHandle) -> MapHandle {
        let (outer, inner_c) = (self.clone(), inner.clone());
        MapHandle::unary(format!("{}∘{}", self.name, inner.name), move |x| outer.call(&inner_c.call(x)?))
    }
}

/// `x ↦ x⁻¹` in `M_n(K)`.
pub fn inversion() -> MapHandle {
    MapHandle::unary("inverse", |x| x.inverse())
}

/// `x ↦ x²`.
pub fn squaring() -> MapHandle {
    MapHandle::unary("square", |x| Ok(x * x))
}

/// Jordan inversion `x ↦ Q(x)⁻¹x` in `ctx`.
pub fn jordan_inversion(ctx: JordanContext) -> MapHandle {
    MapHandle::unary("jordan_inverse", move |x| ctx.jordan_inverse(x))
}

/// `x ↦ x^y` for fixed `y`.
pub fn quasi_inverse_in_x(ctx: JordanContext, y: AlgebraElement) -> MapHandle {
    MapHandle::unary("quasi_inverse_x", move |x| ctx.quasi_inverse(x, &y))
}

/// `y ↦ x^y` for fixed `x`.
pub fn quasi_inverse_in_y(ctx: JordanContext, x: AlgebraElement) -> MapHandle {
    MapHandle::unary("quasi_inverse_y", move |y| ctx.quasi_inverse(&x, y))
}

/// `x ↦ g.x`.
pub fn action(g: GroupElement) -> MapHandle {
    MapHandle::unary("act", move |x| act(&g, x))
}

/// `x ↦ Mx`.
pub fn linear(m: Matrix) -> MapHandle {
    MapHandle::unary("linear", move |x| Ok(&m * x))
}

pub fn constant(c: Matrix) -> MapHandle {
    MapHandle::unary("constant", move |_| Ok(c.clone()))
}

fn domain(e: Error) -> Error {
    match e {
        Error::Shape(_) | Error::RingMismatch(_) | Error::Invalid(_) => e,
        _ => Error::DomainViolation,
    }
}

/// `x + εv` with `ε` a new outermost layer over the rings of `x`, `v` and `hint`.
pub fn lift(x: &Matrix, v: &Matrix, hint: &RingDescriptor) -> Result<Matrix> {
    let ring = x.ring().join(&v.ring())?.join(hint)?;
    Matrix::dual_lift(&x.embed(&ring)?, &v.embed(&ring)?)
}

/// ε-part of `y` viewed in `lifted` (which must be a dual ring).
pub fn eps_part(y: &Matrix, lifted: &RingDescriptor) -> Result<Matrix> {
    Ok(y.embed(lifted)?.dual_parts()?.1)
}

/// `(f(x + th) - f(x)) / t`.
pub fn diff_quotient(f: &MapHandle, x: &Matrix, h: &Matrix, t: &Scalar) -> Result<Matrix> {
    let t_inv = t.inv()?;
    let moved = x + &h.scale(t);
    let fx = f.call(x).map_err(domain)?;
    let fm = f.call(&moved).map_err(domain)?;
    Ok((&fm - &fx).scale(&t_inv))
}

/// `df(x)v`, the ε-part of `f(x + εv)`.
pub fn dual_derivative(f: &MapHandle, x: &Matrix, v: &Matrix) -> Result<Matrix> {
    let lifted = lift(x, v, &x.ring())?;
    let ring = lifted.ring();
    let y = f.call(&lifted).map_err(domain)?;
    eps_part(&y, &ring)
}

/// `[X, Y](x) = dY(x)X(x) - dX(x)Y(x)`.
pub fn lie_bracket_fields(x_field: &MapHandle, y_field: &MapHandle, x: &Matrix) -> Result<Matrix> {
    let xv = x_field.call(x).map_err(domain)?;
    let yv = y_field.call(x).map_err(domain)?;
    Ok(&dual_derivative(y_field, x, &xv)? - &dual_derivative(x_field, x, &yv)?)
}

/// The field `[X, Y]` as a map.
pub fn bracket_field(x_field: &MapHandle, y_field: &MapHandle) -> MapHandle {
    let (a, b) = (x_field.clone(), y_field.clone());
    MapHandle::unary(format!("[{},{}]", a.name, b.name), move |x| lie_bracket_fields(&a, &b, x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub samples: usize,
    pub agreeing: usize,
    /// Largest entrywise deviation; `0` or `inf` on exact rings.
    pub max_deviation: f64,
    pub first_failure: Option<usize>,
    /// Samples where `f` or `expected` raised an error.
    pub errors: usize,
}

impl DerivativeReport {
    pub fn passed(&self) -> bool {
        self.agreeing == self.samples
    }
}

/// Compares `dual_derivative(f, x, v)` against `expected(x, v)` on each sample.
pub fn derivative_check(f: &MapHandle, expected: &MapHandle, samples: &[(Matrix, Matrix)], tol: f64) -> DerivativeReport {
    let mut report = DerivativeReport { samples: samples.len(), agreeing: 0, max_deviation: 0.0, first_failure: None, errors: 0 };
    for (i, (x, v)) in samples.iter().enumerate() {
        let outcome = dual_derivative(f, x, v).and_then(|d| Ok((d, expected.eval(&[x.clone(), v.clone()])?)));
        let ok = match outcome {
            Ok((got, want)) => {
                let dev = got.distance(&want);
                report.max_deviation = report.max_deviation.max(dev);
                got.agrees(&want, tol)
            }
            Err(_) => {
                report.errors += 1;
                false
            }
        };
        if ok {
            report.agreeing += 1;
        } else if report.first_failure.is_none() {
            report.first_failure = Some(i);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie3::{denominators, exp_ad};
    use crate::algebra::op_solve;
    use crate::jordan::Flavor;
    use crate::algebra::InvolutionSpec;

    fn q() -> RingDescriptor {
        RingDescriptor::Rational
    }

    fn s(k: i64) -> Matrix {
        Matrix::from_i64(&q(), &[&[k]])
    }

    fn r(a: i64, b: i64) -> Matrix {
        Matrix::from_rows(vec![vec![Scalar::rational(a, b)]]).unwrap()
    }

    #[test]
    fn diff_quotient_examples() {
        assert_eq!(diff_quotient(&squaring(), &s(1), &s(1), &Scalar::integer(1)).unwrap(), s(3));
        let lin = linear(s(5));
        assert_eq!(diff_quotient(&lin, &s(7), &s(2), &Scalar::rational(1, 3)).unwrap(), s(10));
        assert_eq!(diff_quotient(&inversion(), &s(1), &s(1), &Scalar::integer(1)).unwrap(), r(-1, 2));
        assert_eq!(diff_quotient(&inversion(), &s(1), &s(1), &Scalar::integer(0)), Err(Error::NotAUnit));
        assert_eq!(diff_quotient(&inversion(), &s(0), &s(1), &Scalar::integer(1)), Err(Error::DomainViolation));
    }

    #[test]
    fn dual_derivative_examples() {
        assert_eq!(dual_derivative(&inversion(), &s(2), &s(1)).unwrap(), r(-1, 4));
        assert!(dual_derivative(&constant(s(9)), &s(2), &s(1)).unwrap().is_zero());
        let ctx = JordanContext::full(q(), 2);
        let y = Matrix::from_i64(&q(), &[&[1, 2], &[0, -1]]);
        let v = Matrix::from_i64(&q(), &[&[3, 1], &[1, 0]]);
        let qi = quasi_inverse_in_x(ctx, y);
        assert_eq!(dual_derivative(&qi, &Matrix::zeros(&q(), 2, 2), &v).unwrap(), v);
    }

    #[test]
    fn bracket_examples() {
        let a = linear(Matrix::from_i64(&q(), &[&[0, 1], &[0, 0]]));
        let b = linear(Matrix::from_i64(&q(), &[&[0, 0], &[1, 0]]));
        let x = Matrix::from_i64(&q(), &[&[1], &[1]]);
        assert!(lie_bracket_fields(&a, &a, &x).unwrap().is_zero());
        let c = constant(Matrix::from_i64(&q(), &[&[1], &[2]]));
        let d = constant(Matrix::from_i64(&q(), &[&[0], &[5]]));
        assert!(lie_bracket_fields(&c, &d, &x).unwrap().is_zero());
        assert_eq!(lie_bracket_fields(&a, &b, &x).unwrap(), Matrix::from_i64(&q(), &[&[-1], &[1]]));
    }

    #[test]
    fn derivative_check_examples() {
        let g = exp_ad(&s(1), -1).unwrap();
        let d = dual_derivative(&action(g.clone()), &s(1), &s(1)).unwrap();
        assert_eq!(d, r(1, 4));
        let den = denominators(&g, &s(1)).unwrap();
        assert_eq!(op_solve(&den.d, &s(1)).unwrap(), r(1, 4));

        let herm = JordanContext::new(q(), 2, Flavor::Hermitian(InvolutionSpec::Transpose)).unwrap();
        let ctx = herm.clone();
        let expected = MapHandle::new("minus_q_inv", 2, move |a: &[Matrix]| {
            let qx = ctx.rep_operators(&a[0], None)?.q;
            Ok(-&ctx.solve(&qx, &a[1])?)
        });
        let x = Matrix::from_i64(&q(), &[&[2, 0], &[0, 3]]);
        let v = Matrix::from_i64(&q(), &[&[1, 1], &[1, 0]]);
        let rep = derivative_check(&jordan_inversion(herm), &expected, &[(x.clone(), v.clone())], 0.0);
        assert!(rep.passed(), "{rep:?}");

        let sq_expected = MapHandle::new("xv+vx", 2, |a: &[Matrix]| Ok(&(&a[0] * &a[1]) + &(&a[1] * &a[0])));
        assert!(derivative_check(&squaring(), &sq_expected, &[(x, v)], 0.0).passed());
    }

    #[test]
    fn second_derivatives_are_symmetric() {
        let f = inversion();
        let x = Matrix::from_i64(&q(), &[&[2, 1], &[1, 1]]);
        let v = Matrix::from_i64(&q(), &[&[0, 1], &[3, 0]]);
        let w = Matrix::from_i64(&q(), &[&[1, 0], &[-1, 2]]);
        let (f1, v1, w1) = (f.clone(), v.clone(), w.clone());
        let dv = MapHandle::unary("dv", move |p| dual_derivative(&f1, p, &v1));
        let dw = MapHandle::unary("dw", move |p| dual_derivative(&f, p, &w1));
        assert_eq!(dual_derivative(&dv, &x, &w).unwrap(), dual_derivative(&dw, &x, &v).unwrap());
    }
}
