//! Property tests for the algebraic invariants of each module.

use jpgeom::algebra::{alg_invert, op_from_action, FormSymmetry, InvolutionSpec};
use jpgeom::calculus::{diff_quotient, dual_derivative, inversion, linear, quasi_inverse_in_x, squaring};
use jpgeom::jordan::{Flavor, JordanContext};
use jpgeom::lie3::{ad_bracket, exp_ad, hat_minus, hat_plus, pr_plus, Generator, GroupElement};
use jpgeom::projline::{act_frac, gamma_chart, mu_dilation, transversal, ProjectivePoint};
use jpgeom::symspace::{flip_space, GroupKind, SymmetricSpace};
use jpgeom::{Matrix, RingDescriptor, Scalar};
use proptest::prelude::*;

fn q() -> RingDescriptor {
    RingDescriptor::Rational
}

fn ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, len)
}

fn to_matrix(ring: &RingDescriptor, rows: usize, cols: usize, v: &[i64]) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| ring.from_i64(v[i * cols + j]))
}

/// A `rows × cols` rational matrix with entries in `[-3, 3]`.
fn mat(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    ints(rows * cols).prop_map(move |v| to_matrix(&q(), rows, cols, &v))
}

fn sq2() -> impl Strategy<Value = Matrix> {
    mat(2, 2)
}

fn invertible2() -> impl Strategy<Value = Matrix> {
    sq2().prop_filter("invertible", Matrix::is_invertible)
}

fn scalar_in(ring: RingDescriptor) -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=7).prop_map(move |(a, b)| match &ring {
        RingDescriptor::Rational => Scalar::rational(a, b),
        r => r.from_i64(a * b),
    })
}

fn involutions() -> impl Strategy<Value = InvolutionSpec> {
    prop_oneof![
        Just(InvolutionSpec::Transpose),
        Just(InvolutionSpec::form_adjoint(Matrix::from_i64(&q(), &[&[1, 0], &[0, 2]]), FormSymmetry::Symmetric).unwrap()),
        Just(InvolutionSpec::form_adjoint(Matrix::from_i64(&q(), &[&[0, 1], &[-1, 0]]), FormSymmetry::Skew).unwrap()),
    ]
}

fn word2() -> impl Strategy<Value = GroupElement> {
    prop::collection::vec((any::<bool>(), sq2()), 1..=3).prop_map(|gens| {
        let word = gens.into_iter().map(|(up, v)| Generator { degree: if up { 1 } else { -1 }, v }).collect();
        GroupElement::from_word(&q(), 2, word).unwrap()
    })
}

fn point2() -> impl Strategy<Value = ProjectivePoint> {
    mat(4, 2).prop_filter_map("full rank", |m| ProjectivePoint::new(m).ok())
}

fn dual(re: &Scalar, eps: &Scalar) -> Scalar {
    Scalar::dual_lift(re, eps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(a in scalar_in(q()), b in scalar_in(q()), c in scalar_in(q()),
                   x in 0i64..5, y in 0i64..5, z in 0i64..5) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        let f5 = RingDescriptor::prime_field(5).unwrap();
        let (x, y, z) = (f5.from_i64(x), f5.from_i64(y), f5.from_i64(z));
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        if x.is_unit() {
            prop_assert_eq!(x.inv().unwrap().inv().unwrap(), x);
        }
    }

    #[test]
    fn inverse_is_an_involution_on_units(a in scalar_in(q())) {
        prop_assume!(a.is_unit());
        prop_assert_eq!(a.inv().unwrap().inv().unwrap(), a);
    }

    #[test]
    fn nested_duals_keep_mixed_terms(v in prop::collection::vec(-5i64..=5, 8)) {
        // (a + bε + cδ + dεδ)(a' + b'ε + c'δ + d'εδ), δ the outer layer.
        let s = |k: i64| Scalar::integer(k);
        let build = |a, b, c, d| dual(&dual(&s(a), &s(b)), &dual(&s(c), &s(d)));
        let (p, r) = (build(v[0], v[1], v[2], v[3]), build(v[4], v[5], v[6], v[7]));
        let want = build(
            v[0] * v[4],
            v[0] * v[5] + v[1] * v[4],
            v[0] * v[6] + v[2] * v[4],
            v[0] * v[7] + v[3] * v[4] + v[1] * v[6] + v[2] * v[5],
        );
        prop_assert_eq!(&p * &r, want);
    }

    #[test]
    fn involutions_are_anti_automorphisms(inv in involutions(), x in sq2(), y in sq2()) {
        prop_assert_eq!(inv.apply(&(&x * &y)), &inv.apply(&y) * &inv.apply(&x));
        prop_assert_eq!(inv.apply(&inv.apply(&x)), x.clone());
        if x.is_invertible() {
            prop_assert_eq!(inv.apply(&alg_invert(&x).unwrap()), alg_invert(&inv.apply(&x)).unwrap());
        }
    }

    #[test]
    fn operators_reproduce_actions(a in sq2(), b in sq2(), x in sq2()) {
        let op = op_from_action(&q(), 2, |z| Ok(&(&a * z) * &b)).unwrap();
        prop_assert_eq!(op.apply(&x).unwrap(), &(&a * &x) * &b);
    }

    #[test]
    fn dual_inverse_formula(m0 in invertible2(), m1 in sq2()) {
        let m = Matrix::dual_lift(&m0, &m1).unwrap();
        let i0 = m0.inverse().unwrap();
        let want = Matrix::dual_lift(&i0, &-&(&(&i0 * &m1) * &i0)).unwrap();
        prop_assert_eq!(m.inverse().unwrap(), want);
    }

    #[test]
    fn jordan_identity_full_and_hermitian(a in ints(4), b in ints(4)) {
        let herm = JordanContext::new(q(), 2, Flavor::Hermitian(InvolutionSpec::Transpose)).unwrap();
        for ctx in [JordanContext::full(q(), 2), herm] {
            let coords = |v: &[i64]| Matrix::from_fn(ctx.dim(), 1, |i, _| q().from_i64(v[i]));
            let (x, y) = (ctx.element(&coords(&a)).unwrap(), ctx.element(&coords(&b)).unwrap());
            let x2 = ctx.jordan_product(&x, &x).unwrap();
            let lhs = ctx.jordan_product(&x, &ctx.jordan_product(&x2, &y).unwrap()).unwrap();
            let rhs = ctx.jordan_product(&x2, &ctx.jordan_product(&x, &y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn l_inverse_relations(x in invertible2()) {
        let ctx = JordanContext::full(q(), 2);
        let xi = ctx.jordan_inverse(&x).unwrap();
        prop_assert_eq!(ctx.jordan_product(&xi, &x).unwrap(), ctx.one());
        let l = ctx.rep_operators(&x, None).unwrap().l.unwrap();
        let li = ctx.rep_operators(&xi, None).unwrap().l.unwrap();
        prop_assert_eq!(l.compose(&li), li.compose(&l));
    }

    #[test]
    fn triple_product_is_a_double_bracket(x in sq2(), y in sq2(), z in sq2()) {
        let ctx = JordanContext::full(q(), 2);
        let t = ctx.triple_product(&x, &y, &z).unwrap();
        let bracket = pr_plus(&ad_bracket(&ad_bracket(&hat_plus(&x), &hat_minus(&y)), &hat_plus(&z)));
        prop_assert_eq!(&bracket, &t);
        // With y placed in degree -1 through -ŷ the double bracket is -T: the sign convention.
        let loos = pr_plus(&ad_bracket(&ad_bracket(&hat_plus(&x), &hat_minus(&-&y)), &hat_plus(&z)));
        prop_assert_eq!(loos, -&t);
    }

    #[test]
    fn ad_is_multiplicative(g in word2(), h in word2(), x in mat(4, 4)) {
        prop_assert_eq!(g.compose(&h).ad(&x), g.ad(&h.ad(&x)));
    }

    #[test]
    fn fractional_action_is_an_action(g in word2(), h in word2(), e in point2()) {
        prop_assert_eq!(act_frac(&g.compose(&h), &e), act_frac(&g, &act_frac(&h, &e)));
    }

    #[test]
    fn mu_coherence(x in point2(), a in point2(), y in point2(), r in 1i64..=3, s in -3i64..=-1) {
        prop_assume!(transversal(&x, &a) && transversal(&y, &a));
        let (r, s) = (Scalar::integer(r), Scalar::integer(s));
        let inner = mu_dilation(&s, &x, &a, &y).unwrap();
        prop_assert_eq!(mu_dilation(&r, &x, &a, &inner).unwrap(), mu_dilation(&(&r * &s), &x, &a, &y).unwrap());
        let twice = mu_dilation(&Scalar::integer(-1), &x, &a, &mu_dilation(&Scalar::integer(-1), &x, &a, &y).unwrap()).unwrap();
        prop_assert_eq!(twice, y);
    }

    #[test]
    fn quasi_inverse_matches_exp_action(x in sq2(), y in sq2()) {
        let ctx = JordanContext::full(q(), 2);
        let lhs = ctx.quasi_inverse(&x, &y);
        let rhs = jpgeom::lie3::act(&exp_ad(&y, -1).unwrap(), &x);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!((a.name(), b.name()), ("NotQuasiInvertible", "NotInChart")),
            (a, b) => prop_assert!(false, "domains differ: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn differential_is_linear(x in invertible2(), v in sq2(), w in sq2(), a in -3i64..=3, b in -3i64..=3) {
        let f = inversion();
        let (a, b) = (Scalar::integer(a), Scalar::integer(b));
        let combo = &v.scale(&a) + &w.scale(&b);
        let lhs = dual_derivative(&f, &x, &combo).unwrap();
        let rhs = &dual_derivative(&f, &x, &v).unwrap().scale(&a) + &dual_derivative(&f, &x, &w).unwrap().scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule(x in invertible2(), v in sq2(), m in sq2()) {
        let (f, g) = (squaring(), inversion());
        let lhs = dual_derivative(&g.compose(&f), &x, &v);
        prop_assume!(lhs.is_ok());
        let fx = f.call(&x).unwrap();
        let rhs = dual_derivative(&g, &fx, &dual_derivative(&f, &x, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs.unwrap(), rhs);
        let lin = linear(m.clone());
        prop_assert_eq!(dual_derivative(&lin.compose(&f), &x, &v).unwrap(), &m * &dual_derivative(&f, &x, &v).unwrap());
    }

    #[test]
    fn second_derivatives_commute(x in invertible2(), v in sq2(), w in sq2()) {
        let f = inversion();
        let dv = {
            let (f, v) = (f.clone(), v.clone());
            jpgeom::calculus::MapHandle::unary("dv", move |y| dual_derivative(&f, y, &v))
        };
        let dw = {
            let (f, w) = (f.clone(), w.clone());
            jpgeom::calculus::MapHandle::unary("dw", move |y| dual_derivative(&f, y, &w))
        };
        prop_assert_eq!(dual_derivative(&dv, &x, &w).unwrap(), dual_derivative(&dw, &x, &v).unwrap());
    }

    #[test]
    fn difference_quotients_converge_to_the_dual_derivative(x in invertible2(), h in sq2()) {
        // Squaring is polynomial: (f(x + th) - f(x))/t = xh + hx + t·h², exactly.
        let f = squaring();
        let d = dual_derivative(&f, &x, &h).unwrap();
        for t in [Scalar::integer(1), Scalar::rational(1, 2), Scalar::rational(1, 4)] {
            let want = &d + &(&h * &h).scale(&t);
            prop_assert_eq!(diff_quotient(&f, &x, &h, &t).unwrap(), want);
        }
    }

    #[test]
    fn quotient_rule_for_bergman_families(x in sq2(), a in sq2(), v in sq2(), u in sq2()) {
        // F(x) = B(x, a)⁻¹v; dF(x)u = -B⁻¹ (∂_u B) B⁻¹ v.
        let ctx = JordanContext::full(q(), 2);
        let b = ctx.bergman_operator(&x, &a).unwrap();
        prop_assume!(b.is_invertible());
        let f = {
            let (ctx, a, v) = (ctx.clone(), a.clone(), v.clone());
            jpgeom::calculus::MapHandle::unary("B^-1 v", move |x| ctx.solve(&ctx.bergman_operator(x, &a)?, &v))
        };
        let got = dual_derivative(&f, &x, &u).unwrap();
        let binv_v = ctx.solve(&b, &v).unwrap();
        let db = {
            let (ctx, a, binv_v) = (ctx.clone(), a.clone(), binv_v.clone());
            jpgeom::calculus::MapHandle::unary("B z", move |x| ctx.apply(&ctx.bergman_operator(x, &a)?, &binv_v))
        };
        let want = -&ctx.solve(&b, &dual_derivative(&db, &x, &u).unwrap()).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn quasi_inverse_derivative_exists_where_defined(x in sq2(), y in sq2(), v in sq2()) {
        let ctx = JordanContext::full(q(), 2);
        prop_assume!(ctx.is_quasi_invertible(&x, &y).unwrap());
        let f = quasi_inverse_in_x(ctx, y.clone());
        // d/dx x(1 + yx)⁻¹ = (1 + xy)⁻¹ v (1 + yx)⁻¹.
        let one = Matrix::identity(&q(), 2);
        let want = &(&(&one + &(&x * &y)).inverse().unwrap() * &v) * &(&one + &(&y * &x)).inverse().unwrap();
        prop_assert_eq!(dual_derivative(&f, &x, &v).unwrap(), want);
    }

    #[test]
    fn i11_projective_multiplication_is_xy_inverse_x(x in invertible2(), y in invertible2()) {
        prop_assume!((&x + &y).is_invertible());
        let base = gamma_chart(&Matrix::identity(&q(), 2));
        let spec = jpgeom::projline::PolaritySpec::linear(jpgeom::projline::i11(&q(), 2));
        let space = SymmetricSpace::projective(spec, base).unwrap();
        let p = |z: &Matrix| jpgeom::symspace::SpacePoint::Projective(gamma_chart(z));
        let m = space.sym_mul(&p(&x), &p(&y)).unwrap();
        let z = jpgeom::projline::chart_coords(m.projective().unwrap()).unwrap();
        prop_assert_eq!(z, &(&x * &y.inverse().unwrap()) * &x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn lts_axioms(u in sq2(), v in sq2(), w in sq2(), a in sq2(), b in sq2()) {
        let spaces = [
            SymmetricSpace::jordan_units(JordanContext::full(q(), 2)).unwrap(),
            flip_space(&q(), 2),
            SymmetricSpace::group(GroupKind::FullLinear, q(), 2).unwrap(),
        ];
        for s in &spaces {
            let r = |x: &Matrix, y: &Matrix, z: &Matrix| s.lts_bracket(x, y, z).unwrap();
            prop_assert_eq!(r(&u, &v, &w), -&r(&v, &u, &w));
            let cyclic = &(&r(&u, &v, &w) + &r(&v, &w, &u)) + &r(&w, &u, &v);
            prop_assert!(cyclic.is_zero());
            // R(a, b) is a derivation of the triple bracket.
            let lhs = r(&a, &b, &r(&u, &v, &w));
            let rhs = &(&r(&r(&a, &b, &u), &v, &w) + &r(&u, &r(&a, &b, &v), &w)) + &r(&u, &v, &r(&a, &b, &w));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
