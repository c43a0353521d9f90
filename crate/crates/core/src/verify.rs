//! Seeded verification suites. Each suite checks one family of identities
//! on random inputs; trial `k` draws from its own stream derived from the
//! seed, so reports are reproducible.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{op_from_action, FormSymmetry, InvolutionSpec, LinearOperator};
use crate::calculus::{action, dual_derivative, eps_part, inversion, jordan_inversion, lift};
use crate::error::{Error, Result};
use crate::jordan::{Flavor, JordanContext};
use crate::json::{element_to_json, group_to_json, matrix_to_json, point_to_json, scalar_to_json};
use crate::lie3::{act, act_fractional, ad_bracket, denominators, exp_ad, hat_minus, hat_plus, pr_plus};
use crate::matrix::Matrix;
use crate::projline::{
    act_frac, cayley, chart_coords, classify_point, flip, gamma_chart, i11, j_matrix, mu_dilation, o_minus, o_plus,
    phi_involution, phi_involution_with_complement, phi_matrix, transversal, PolaritySpec, ProjectivePoint,
};
use crate::sample::{retry, Sampler};
use crate::scalar::RingDescriptor;
use crate::symspace::{flip_space, GroupKind, SpacePoint, SymmetricSpace, DEFAULT_SERIES_ORDER};

/// Suite names with one-line descriptions.
pub const SUITES: &[(&str, &str)] = &[
    ("fundamental", "Jordan identity and the fundamental formula Q(Q(x)y) = Q(x)Q(y)Q(x)"),
    ("jordan-pair", "outer symmetry, the 5-term identity and T as a double bracket"),
    ("bergman", "ad-form Bergman operator equals (1+xy)z(1+yx)"),
    ("thm46", "quasi-inverse equals the action of exp(ad y) on the chart, including domains"),
    ("cocycle", "d_{fh}(x) = d_h(x) d_f(h.x)"),
    ("m-axioms", "(M1)-(M4) and Tm(v,w) = 2v - w for Jordan units, projective and group spaces"),
    ("lts", "numeric [[u~,v~],w~](o) equals the closed-form triple bracket; Lts axioms"),
    ("derivative-laws", "dual derivatives of the group action, Jordan inversion and inversion"),
    ("cayley", "Cayley, flip and J identities; fractional action versus chart action"),
    ("phi", "Phi_j anti-automorphisms, complement independence, chart characterizations"),
    ("exp-tanh", "Exp(v) = tanh series and m(Exp v, o) = Exp 2v (float64 only)"),
    ("unitary", "closure of U(A, *) under xy^-1x and agreement through the Cayley chart"),
    ("mu", "dilations compose multiplicatively and act as z -> rz in the standard chart"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Ad,
    Loos,
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ad" => Ok(Convention::Ad),
            "loos" => Ok(Convention::Loos),
            other => Err(format!("unknown convention {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: String,
    pub ring: RingDescriptor,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub order: usize,
    pub convention: Convention,
}

impl SuiteConfig {
    pub fn new(suite: &str, ring: RingDescriptor, n: usize, trials: u64, seed: u64) -> SuiteConfig {
        SuiteConfig {
            suite: suite.to_string(),
            ring,
            n,
            trials,
            seed,
            tol: 1e-9,
            order: DEFAULT_SERIES_ORDER,
            convention: Convention::Ad,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub ring: String,
    pub n: usize,
    pub seed: u64,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Configuration problems, reported before any trial runs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UsageError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("suite {suite} does not support ring {ring}")]
    UnsupportedRing { suite: String, ring: String },
    #[error("{0}")]
    BadConfig(String),
}

enum Outcome {
    Pass,
    Skip,
    Fail(Value),
}

type Trial = fn(&mut Sampler, &SuiteConfig) -> Result<Outcome>;

fn lookup(name: &str) -> Option<Trial> {
    Some(match name {
        "fundamental" => fundamental,
        "jordan-pair" => jordan_pair,
        "bergman" => bergman,
        "thm46" => thm46,
        "cocycle" => cocycle,
        "m-axioms" => m_axioms,
        "lts" => lts,
        "derivative-laws" => derivative_laws,
        "cayley" => cayley_suite,
        "phi" => phi,
        "exp-tanh" => exp_tanh,
        "unitary" => unitary,
        "mu" => mu,
        _ => return None,
    })
}

fn validate(cfg: &SuiteConfig) -> std::result::Result<Trial, UsageError> {
    let trial = lookup(&cfg.suite).ok_or_else(|| UsageError::UnknownSuite(cfg.suite.clone()))?;
    if cfg.trials == 0 {
        return Err(UsageError::BadConfig("trials must be at least 1".into()));
    }
    if cfg.n == 0 {
        return Err(UsageError::BadConfig("n must be at least 1".into()));
    }
    if cfg.ring.is_dual() {
        return Err(UsageError::UnsupportedRing { suite: cfg.suite.clone(), ring: cfg.ring.to_string() });
    }
    if cfg.suite == "exp-tanh" && cfg.ring != RingDescriptor::Float64 {
        return Err(UsageError::UnsupportedRing { suite: cfg.suite.clone(), ring: cfg.ring.to_string() });
    }
    Ok(trial)
}

/// Runs a suite. Every trial is independent; an unexpected error inside a
/// trial counts as a failure and is reported as the counterexample.
pub fn run_suite(cfg: &SuiteConfig) -> std::result::Result<Report, UsageError> {
    let trial = validate(cfg)?;
    let start = Instant::now();
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    let mut counterexample = None;
    for k in 0..cfg.trials {
        let mut s = Sampler::for_trial(cfg.ring.clone(), cfg.seed, k);
        match trial(&mut s, cfg) {
            Ok(Outcome::Pass) => passed += 1,
            Ok(Outcome::Skip) => skipped += 1,
            Ok(Outcome::Fail(v)) => {
                failed += 1;
                counterexample.get_or_insert(json!({"trial": k, "inputs": v}));
            }
            Err(e) => {
                failed += 1;
                counterexample.get_or_insert(json!({"trial": k, "error": e.name(), "detail": e.to_string()}));
            }
        }
    }
    Ok(Report {
        suite: cfg.suite.clone(),
        ring: cfg.ring.to_string(),
        n: cfg.n,
        seed: cfg.seed,
        trials: cfg.trials,
        passed,
        failed,
        skipped,
        counterexample,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Exact equality on exact rings; on floats, agreement relative to the
/// size of the operands.
fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    if a.ring().is_exact() {
        return a == b;
    }
    let scale = a.entries().iter().chain(b.entries()).map(|s| s.magnitude()).fold(1.0, f64::max);
    a.agrees(b, tol * scale)
}

fn close_op(a: &LinearOperator, b: &LinearOperator, tol: f64) -> bool {
    close(a.matrix(), b.matrix(), tol)
}

/// `Pass` when every check holds, otherwise `Fail` with the given inputs.
fn verdict(checks: &[(&str, bool)], inputs: impl FnOnce() -> Value) -> Outcome {
    let failing: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    if failing.is_empty() {
        Outcome::Pass
    } else {
        let mut v = inputs();
        v["failing"] = json!(failing);
        Outcome::Fail(v)
    }
}

fn same_error<T, U>(a: &Result<T>, b: &Result<U>) -> bool {
    match (a, b) {
        (Err(x), Err(y)) => x.name() == y.name(),
        _ => false,
    }
}

fn fundamental(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let ctx = JordanContext::full(cfg.ring.clone(), cfg.n);
    let (x, y) = (s.square(cfg.n), s.square(cfg.n));
    let qx = ctx.rep_operators(&x, None)?.q;
    let qy = ctx.rep_operators(&y, None)?.q;
    let qxy = ctx.apply(&qx, &y)?;
    let lhs = ctx.rep_operators(&qxy, None)?.q;
    let rhs = qx.compose(&qy).compose(&qx);
    let x2 = &x * &x;
    let jordan_l = ctx.jordan_product(&x, &ctx.jordan_product(&x2, &y)?)?;
    let jordan_r = ctx.jordan_product(&x2, &ctx.jordan_product(&x, &y)?)?;
    Ok(verdict(
        &[("fundamental formula", close_op(&lhs, &rhs, cfg.tol)), ("Jordan identity", close(&jordan_l, &jordan_r, cfg.tol))],
        || json!({"x": matrix_to_json(&x), "y": matrix_to_json(&y)}),
    ))
}

fn jordan_pair(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let ctx = JordanContext::full(cfg.ring.clone(), cfg.n);
    let [u, v, x, y, z] = std::array::from_fn(|_| s.square(cfg.n));
    let t = |a: &Matrix, b: &Matrix, c: &Matrix| ctx.triple_product(a, b, c);
    let symmetric = close(&t(&x, &y, &z)?, &t(&z, &y, &x)?, cfg.tol);
    let lhs = t(&u, &v, &t(&x, &y, &z)?)?;
    let rhs = &(&t(&t(&u, &v, &x)?, &y, &z)? - &t(&x, &t(&v, &u, &y)?, &z)?) + &t(&x, &y, &t(&u, &v, &z)?)?;
    let bracket = pr_plus(&ad_bracket(&ad_bracket(&hat_plus(&x), &hat_minus(&y)), &hat_plus(&z)));
    Ok(verdict(
        &[
            ("outer symmetry", symmetric),
            ("5-term identity", close(&lhs, &rhs, cfg.tol)),
            ("double bracket", close(&bracket, &t(&x, &y, &z)?, cfg.tol)),
        ],
        || json!({"u": matrix_to_json(&u), "v": matrix_to_json(&v), "x": matrix_to_json(&x), "y": matrix_to_json(&y), "z": matrix_to_json(&z)}),
    ))
}

fn bergman(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let ctx = JordanContext::full(cfg.ring.clone(), cfg.n);
    let (x, y) = (s.square(cfg.n), s.square(cfg.n));
    let one = Matrix::identity(&cfg.ring, cfg.n);
    let (op, sign) = match cfg.convention {
        Convention::Ad => (ctx.bergman_operator(&x, &y)?, one.clone()),
        Convention::Loos => (ctx.loos_bergman(&x, &y)?, -&one),
    };
    let sy = &sign * &y;
    let left = &one + &(&x * &sy);
    let right = &one + &(&sy * &x);
    let closed = op_from_action(&cfg.ring, cfg.n, |z| Ok(&(&left * z) * &right))?;
    Ok(verdict(&[("closed form", close_op(&op, &closed, cfg.tol))], || {
        json!({"x": matrix_to_json(&x), "y": matrix_to_json(&y)})
    }))
}

fn thm46(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let ctx = JordanContext::full(cfg.ring.clone(), cfg.n);
    let (x, y) = (s.square(cfg.n), s.square(cfg.n));
    let (q, g) = match cfg.convention {
        Convention::Ad => (ctx.quasi_inverse(&x, &y), exp_ad(&y, -1)?),
        Convention::Loos => (ctx.loos_quasi_inverse(&x, &y), exp_ad(&-&y, -1)?),
    };
    let a = act(&g, &x);
    let agree = match (&q, &a) {
        (Ok(q), Ok(a)) => close(q, a, cfg.tol),
        (Err(Error::NotQuasiInvertible), Err(Error::NotInChart)) => true,
        _ => false,
    };
    let h = s.word(cfg.n, 3);
    let z = s.square(cfg.n);
    let lie = act(&h, &z);
    let frac = act_fractional(&h, &z);
    let frac_agree = match (&lie, &frac) {
        (Ok(l), Ok(f)) => close(l, f, cfg.tol),
        _ => same_error(&lie, &frac),
    };
    Ok(verdict(&[("quasi-inverse = exp action", agree), ("act = fractional action", frac_agree)], || {
        json!({"x": matrix_to_json(&x), "y": matrix_to_json(&y), "g": group_to_json(&h), "z": matrix_to_json(&z)})
    }))
}

fn cocycle(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let f = s.word(cfg.n, 3);
    let h = s.word(cfg.n, 3);
    let Some((x, hx)) = retry(|| {
        let x = s.square(cfg.n);
        let hx = act(&h, &x).ok()?;
        act(&f, &hx).ok()?;
        Some((x, hx))
    }) else {
        return Ok(Outcome::Skip);
    };
    let lhs = denominators(&f.compose(&h), &x)?.d;
    let rhs = denominators(&h, &x)?.d.compose(&denominators(&f, &hx)?.d);
    Ok(verdict(&[("cocycle", close_op(&lhs, &rhs, cfg.tol))], || {
        json!({"f": group_to_json(&f), "h": group_to_json(&h), "x": matrix_to_json(&x)})
    }))
}

/// The three spaces exercised by the axiom suites, with a sampler of points
/// and one of tangent vectors at the base point.
fn contexts(ring: &RingDescriptor, n: usize) -> Result<Vec<(&'static str, SymmetricSpace)>> {
    Ok(vec![
        ("jordan_units", SymmetricSpace::jordan_units(JordanContext::full(ring.clone(), n))?),
        ("projective", flip_space(ring, n)),
        ("group", SymmetricSpace::group(GroupKind::FullLinear, ring.clone(), n)?),
    ])
}

fn random_point(s: &mut Sampler, space: &SymmetricSpace) -> Option<SpacePoint> {
    retry(|| {
        let p = space.chart().point(&s.square(space.n()));
        space.contains(&p).ok()?.then_some(p)
    })
}

fn point_json(p: &SpacePoint) -> Value {
    match p {
        SpacePoint::Element(x) => element_to_json(x),
        SpacePoint::Projective(e) => point_to_json(e),
    }
}

fn same_point(space: &SymmetricSpace, a: &SpacePoint, b: &SpacePoint, tol: f64) -> bool {
    match (a, b) {
        (SpacePoint::Projective(e), SpacePoint::Projective(f)) if space.ring().is_exact() => e == f,
        _ => match (space.chart_at(a), space.chart_at(b)) {
            (Ok(chart), Ok(_)) => match (chart.coords(a), chart.coords(b)) {
                (Ok(x), Ok(y)) => close(&x, &y, tol),
                _ => false,
            },
            _ => false,
        },
    }
}

fn m_axioms(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    for (name, space) in contexts(&cfg.ring, cfg.n)? {
        let sample = retry(|| {
            let x = random_point(s, &space)?;
            let y = random_point(s, &space)?;
            let z = random_point(s, &space)?;
            let xy = space.sym_mul(&x, &y).ok()?;
            let xz = space.sym_mul(&x, &z).ok()?;
            let yz = space.sym_mul(&y, &z).ok()?;
            let lhs = space.sym_mul(&x, &yz).ok()?;
            let rhs = space.sym_mul(&xy, &xz).ok()?;
            Some((x, y, z, xy, lhs, rhs))
        });
        let Some((x, y, z, xy, lhs, rhs)) = sample else {
            return Ok(Outcome::Skip);
        };
        let m1 = same_point(&space, &space.sym_mul(&x, &x)?, &x, cfg.tol);
        let m2 = same_point(&space, &space.sym_mul(&x, &xy)?, &y, cfg.tol);
        let m3 = same_point(&space, &lhs, &rhs, cfg.tol);

        // (M4) in a chart centred at x, and the fiber law at the base point.
        let chart = space.chart_at(&x)?;
        let v = s.square(cfg.n);
        let w = s.square(cfg.n);
        let centre = chart.coords(&x)?;
        let lifted = lift(&centre, &v, &cfg.ring)?;
        let image = chart.coords(&space.sym_mul(&x, &chart.point(&lifted))?)?;
        let m4 = close(&eps_part(&image, &lifted.ring())?, &-&v, cfg.tol);
        let o = space.origin();
        let (ov, ow) = (lift(&o, &v, &cfg.ring)?, lift(&o, &w, &cfg.ring)?);
        let chart = space.chart();
        let tm = chart.coords(&space.sym_mul(&chart.point(&ov), &chart.point(&ow))?)?;
        let two_v = &v + &v;
        let fiber = close(&eps_part(&tm, &ov.ring())?, &(&two_v - &w), cfg.tol);

        let out = verdict(&[("M1", m1), ("M2", m2), ("M3", m3), ("M4", m4), ("fiber law", fiber)], || {
            json!({"context": name, "x": point_json(&x), "y": point_json(&y), "z": point_json(&z),
                   "v": matrix_to_json(&v), "w": matrix_to_json(&w)})
        });
        if !matches!(out, Outcome::Pass) {
            return Ok(out);
        }
    }
    // Jordan units of M_n against the I₁,₁ polarity in the standard chart.
    let pair = retry(|| {
        let (x, y) = (s.invertible(cfg.n)?, s.invertible(cfg.n)?);
        (&x + &y).is_invertible().then_some((x, y))
    });
    let Some((x, y)) = pair else {
        return Ok(Outcome::Skip);
    };
    let base = gamma_chart(&Matrix::identity(&cfg.ring, cfg.n));
    let space = SymmetricSpace::projective(PolaritySpec::linear(i11(&cfg.ring, cfg.n)), base)?;
    let m = space.sym_mul(&SpacePoint::Projective(gamma_chart(&x)), &SpacePoint::Projective(gamma_chart(&y)))?;
    let z = chart_coords(m.projective()?)?;
    let want = &(&x * &y.inverse()?) * &x;
    Ok(verdict(&[("I11 polarity = Q(x)y^-1", close(&z, &want, cfg.tol))], || {
        json!({"context": "projective_i11", "x": matrix_to_json(&x), "y": matrix_to_json(&y)})
    }))
}

fn lts(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    for (name, space) in contexts(&cfg.ring, cfg.n)? {
        let [u, v, w] = std::array::from_fn(|_| s.square(cfg.n));
        let numeric = space.lts_numeric(&u, &v, &w)?;
        let closed = space.lts_bracket(&u, &v, &w)?;
        let swapped = space.lts_bracket(&v, &u, &w)?;
        let cyclic = &(&closed + &space.lts_bracket(&v, &w, &u)?) + &space.lts_bracket(&w, &u, &v)?;
        let zero = Matrix::zeros(&cfg.ring, cfg.n, cfg.n);
        let out = verdict(
            &[
                ("numeric = closed form", close(&numeric, &closed, cfg.tol)),
                ("antisymmetry", close(&closed, &-&swapped, cfg.tol)),
                ("Jacobi", close(&cyclic, &zero, cfg.tol)),
            ],
            || json!({"context": name, "u": matrix_to_json(&u), "v": matrix_to_json(&v), "w": matrix_to_json(&w)}),
        );
        if !matches!(out, Outcome::Pass) {
            return Ok(out);
        }
    }
    Ok(Outcome::Pass)
}

fn derivative_laws(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let n = cfg.n;
    let g = s.word(n, 3);
    let Some(x) = retry(|| {
        let x = s.square(n);
        act(&g, &x).ok().map(|_| x)
    }) else {
        return Ok(Outcome::Skip);
    };
    let v = s.square(n);
    let d = denominators(&g, &x)?.d;
    let want = d.inverse()?.apply(&v)?;
    let got = dual_derivative(&action(g.clone()), &x, &v)?;
    let group_ok = close(&got, &want, cfg.tol);

    let herm = JordanContext::new(cfg.ring.clone(), n, Flavor::Hermitian(InvolutionSpec::Transpose))?;
    let Some(h) = s.jordan_unit(&herm) else {
        return Ok(Outcome::Skip);
    };
    let hv = s.element_of(&herm);
    let q = herm.rep_operators(&h, None)?.q;
    let jordan_want = -&herm.solve(&q, &hv)?;
    let jordan_got = dual_derivative(&jordan_inversion(herm.clone()), &h, &hv)?;
    let jordan_ok = close(&jordan_got, &jordan_want, cfg.tol);

    let Some(a) = s.invertible(n) else {
        return Ok(Outcome::Skip);
    };
    let a_inv = a.inverse()?;
    let inv_want = -&(&(&a_inv * &v) * &a_inv);
    let inv_ok = close(&dual_derivative(&inversion(), &a, &v)?, &inv_want, cfg.tol);
    Ok(verdict(
        &[("group action", group_ok), ("Jordan inversion", jordan_ok), ("inversion", inv_ok)],
        || {
            json!({"g": group_to_json(&g), "x": matrix_to_json(&x), "v": matrix_to_json(&v),
                   "h": matrix_to_json(&h), "hv": matrix_to_json(&hv), "a": matrix_to_json(&a)})
        },
    ))
}

/// `Γ(A^×) = Γ(A) ∩ {E ⊤ I₁,₁E}` over every point of `P¹(F_p)`.
pub fn units_are_i11_transversal(p: u64) -> Result<bool> {
    let ring = RingDescriptor::prime_field(p)?;
    let s = i11(&ring, 1);
    let mut points: Vec<(ProjectivePoint, bool)> =
        (0..p as i64).map(|k| (gamma_chart(&Matrix::from_i64(&ring, &[&[k]])), k != 0)).collect();
    points.push((o_plus(&ring, 1), false));
    Ok(points.iter().all(|(e, unit_in_chart)| transversal(e, &act_frac(&s, e)) == *unit_in_chart))
}

fn cayley_suite(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let (ring, n) = (&cfg.ring, cfg.n);
    let c = cayley(ring, n);
    let identity = c.inverse().compose(&i11(ring, n)).compose(&c) == flip(ring, n);
    let j = j_matrix(ring, n);
    let one = Matrix::identity(ring, n);
    let zero = Matrix::zeros(ring, n, n);
    let j_ok = j.word_is_consistent()
        && *j.matrix() == Matrix::from_blocks(&zero, &one, &-&one, &zero)?
        && act_frac(&j, &o_plus(ring, n)) == o_minus(ring, n);

    let (g, h) = (s.word(n, 3), s.word(n, 3));
    let Some(e) = s.point(n) else {
        return Ok(Outcome::Skip);
    };
    let action_ok = act_frac(&g.compose(&h), &e) == act_frac(&g, &act_frac(&h, &e)) || !ring.is_exact();
    let z = s.square(n);
    let via_points = chart_coords(&act_frac(&g, &gamma_chart(&z)));
    let via_chart = act(&g, &z);
    let chart_ok = match (&via_points, &via_chart) {
        (Ok(a), Ok(b)) => close(a, b, cfg.tol),
        _ => same_error(&via_points, &via_chart),
    };
    let exhaustive = match ring {
        RingDescriptor::PrimeField(p) if n == 1 => units_are_i11_transversal(*p)?,
        _ => true,
    };
    Ok(verdict(
        &[
            ("C^-1 I11 C = F", identity),
            ("J word and J.o+ = o-", j_ok),
            ("group action", action_ok),
            ("chart agreement", chart_ok),
            ("units are I11-transversal", exhaustive),
        ],
        || json!({"g": group_to_json(&g), "h": group_to_json(&h), "E": point_to_json(&e), "z": matrix_to_json(&z)}),
    ))
}

/// Transpose on odd trials' streams, a diagonal symmetric form otherwise.
fn sample_involution(s: &mut Sampler, ring: &RingDescriptor, n: usize) -> Result<InvolutionSpec> {
    if s.coin() {
        return Ok(InvolutionSpec::Transpose);
    }
    let form = Matrix::from_fn(n, n, |i, j| if i == j { ring.from_i64(i as i64 + 1) } else { ring.zero() });
    if form.is_invertible() {
        InvolutionSpec::form_adjoint(form, FormSymmetry::Symmetric)
    } else {
        Ok(InvolutionSpec::Transpose)
    }
}

fn phi(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let (ring, n) = (&cfg.ring, cfg.n);
    let inv = sample_involution(s, ring, n)?;
    let (x, y) = (s.square(2 * n), s.square(2 * n));
    let mut anti = true;
    for j in 1..=4 {
        let px = phi_matrix(j, &inv, &x)?;
        anti &= phi_matrix(j, &inv, &(&x * &y))? == &phi_matrix(j, &inv, &y)? * &px
            && phi_matrix(j, &inv, &px)? == x;
    }

    let Some(e) = s.point(n) else {
        return Ok(Outcome::Skip);
    };
    let complements: Option<Vec<ProjectivePoint>> =
        (0..5).map(|_| retry(|| s.point(n).filter(|f| transversal(&e, f)))).collect();
    let Some(complements) = complements else {
        return Ok(Outcome::Skip);
    };
    let mut independent = true;
    for j in 1..=4 {
        let first = phi_involution_with_complement(j, &inv, &e, &complements[0])?;
        for f in &complements[1..] {
            independent &= phi_involution_with_complement(j, &inv, &e, f)? == first;
        }
    }

    let z = s.square(n);
    let zs = inv.apply(&z);
    let chart_is_star = phi_involution(1, &inv, &gamma_chart(&z))? == gamma_chart(&zs);
    let class = classify_point(&inv, &gamma_chart(&z))?;
    let one = Matrix::identity(ring, n);
    let mut characterized = class.hermitian == (zs == z)
        && class.antihermitian == (zs == -&z)
        && class.unitary == (&zs * &z == one);
    characterized &= classify_point(&inv, &gamma_chart(&s.hermitian(&inv, n)))?.hermitian;
    characterized &= classify_point(&inv, &gamma_chart(&s.antihermitian(&inv, n)))?.antihermitian;
    let u = s.unitary(&inv, n);
    if let Some(u) = &u {
        characterized &= classify_point(&inv, &gamma_chart(u))?.unitary;
    }

    let g = s.word(n, 2);
    let mut equivariant = true;
    for j in 1..=4 {
        let lhs = phi_involution(j, &inv, &act_frac(&g, &e))?;
        let pg = crate::lie3::GroupElement::new(phi_matrix(j, &inv, g.matrix())?)?;
        equivariant &= lhs == act_frac(&pg.inverse(), &phi_involution(j, &inv, &e)?);
    }

    let c = cayley(ring, n);
    let a = s.antihermitian(&inv, n);
    let mut transport = classify_point(&inv, &act_frac(&c.inverse(), &gamma_chart(&a)))?.unitary;
    if let Some(u) = &u {
        transport &= classify_point(&inv, &act_frac(&c, &gamma_chart(u)))?.antihermitian;
    }

    Ok(verdict(
        &[
            ("order-2 anti-automorphisms", anti),
            ("complement independence", independent),
            ("Phi1 on the chart is *", chart_is_star),
            ("chart characterizations", characterized),
            ("equivariance", equivariant),
            ("Cayley transport", transport),
        ],
        || json!({"E": point_to_json(&e), "z": matrix_to_json(&z), "g": group_to_json(&g), "a": matrix_to_json(&a)}),
    ))
}

fn exp_tanh(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let n = cfg.n;
    let space = flip_space(&cfg.ring, n);
    let raw = Matrix::from_fn(n, n, |_, _| crate::scalar::Scalar::Float(s.float_in(-1.0, 1.0)));
    let sym = &raw + &raw.transpose();
    let norm = sym.entries().iter().map(|e| e.magnitude().powi(2)).sum::<f64>().sqrt();
    let radius = s.float_in(0.0, 0.5);
    let v = if norm > 0.0 { sym.scale(&crate::scalar::Scalar::Float(radius / norm)) } else { sym };
    let ev = space.exp_tanh(&v, cfg.order)?;
    let e2v = space.exp_tanh(&(&v + &v), cfg.order)?;
    let doubled = space.sym_mul(&ev, space.base_point())?;
    let coords = |p: &SpacePoint| chart_coords(p.projective()?);
    let doubling = close(&coords(&doubled)?, &coords(&e2v)?, cfg.tol);
    let scalar = if n == 1 {
        let t = v.get(0, 0).to_f64().unwrap_or(f64::NAN);
        let z = coords(&ev)?.get(0, 0).to_f64().unwrap_or(f64::NAN);
        (z - t.tanh()).abs() <= cfg.tol
    } else {
        true
    };
    Ok(verdict(&[("scalar tanh", scalar), ("m(Exp v, o) = Exp 2v", doubling)], || json!({"v": matrix_to_json(&v)})))
}

fn unitary(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let (ring, n) = (&cfg.ring, cfg.n);
    let inv = sample_involution(s, ring, n)?;
    let group = SymmetricSpace::group(GroupKind::Unitary(inv.clone()), ring.clone(), n)?;
    let pair = retry(|| {
        let x = s.unitary(&inv, n)?;
        let y = s.unitary(&inv, n)?;
        (&x + &y).is_invertible().then_some((x, y))
    });
    let Some((x, y)) = pair else {
        return Ok(Outcome::Skip);
    };
    let (px, py) = (SpacePoint::Element(x.clone()), SpacePoint::Element(y.clone()));
    let m = group.sym_mul(&px, &py)?;
    let closed = group.contains(&m)?;

    let proj = flip_space(ring, n);
    let c = cayley(ring, n);
    let lift = |z: &Matrix| SpacePoint::Projective(act_frac(&c, &gamma_chart(z)));
    let transported = proj.sym_mul(&lift(&x), &lift(&y))?;
    let agree = same_point(&proj, &transported, &lift(m.element()?), cfg.tol);
    Ok(verdict(&[("closure", closed), ("Cayley agreement", agree)], || {
        json!({"x": matrix_to_json(&x), "y": matrix_to_json(&y)})
    }))
}

fn mu(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Outcome> {
    let n = cfg.n;
    let sample = retry(|| {
        let x = s.point(n)?;
        let a = s.point(n).filter(|a| transversal(&x, a))?;
        let y = s.point(n).filter(|y| transversal(y, &a))?;
        Some((x, a, y))
    });
    let Some((x, a, y)) = sample else {
        return Ok(Outcome::Skip);
    };
    let (r, t) = (s.unit(), s.unit());
    let one = cfg.ring.one();
    let same = |p: &ProjectivePoint, q: &ProjectivePoint| {
        if cfg.ring.is_exact() {
            p == q
        } else {
            let chart = crate::projline::AffineChart::new(&x, &a);
            match chart.and_then(|c| Ok((c.coords(p)?, c.coords(q)?))) {
                Ok((u, w)) => close(&u, &w, cfg.tol),
                Err(_) => false,
            }
        }
    };
    let inner = mu_dilation(&t, &x, &a, &y)?;
    let composed = same(&mu_dilation(&r, &x, &a, &inner)?, &mu_dilation(&(&r * &t), &x, &a, &y)?);
    let unit = same(&mu_dilation(&one, &x, &a, &y)?, &y);
    let z = s.square(n);
    let (o, inf) = (o_minus(&cfg.ring, n), o_plus(&cfg.ring, n));
    let chart_ok = chart_coords(&mu_dilation(&r, &o, &inf, &gamma_chart(&z))?)
        .map(|w| close(&w, &z.scale(&r), cfg.tol))
        .unwrap_or(false);
    Ok(verdict(&[("mu_r mu_s = mu_rs", composed), ("mu_1 = id", unit), ("z -> rz", chart_ok)], || {
        json!({"x": point_to_json(&x), "a": point_to_json(&a), "y": point_to_json(&y),
               "r": scalar_to_json(&r), "s": scalar_to_json(&t), "z": matrix_to_json(&z)})
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(suite: &str, ring: RingDescriptor, n: usize, trials: u64) -> Report {
        let report = run_suite(&SuiteConfig::new(suite, ring, n, trials, 1)).unwrap();
        assert!(report.ok(), "{suite}: {report:?}");
        report
    }

    #[test]
    fn every_suite_passes_briefly() {
        let q = RingDescriptor::Rational;
        for (name, _) in SUITES {
            if *name == "exp-tanh" {
                run(name, RingDescriptor::Float64, 2, 3);
            } else {
                run(name, q.clone(), 2, 3);
            }
        }
    }

    #[test]
    fn fundamental_reports_all_passed() {
        let r = run("fundamental", RingDescriptor::Rational, 2, 50);
        assert_eq!((r.passed, r.failed, r.skipped), (50, 0, 0));
    }

    #[test]
    fn usage_errors() {
        let bad = SuiteConfig::new("nosuchsuite", RingDescriptor::Rational, 2, 1, 1);
        assert_eq!(run_suite(&bad), Err(UsageError::UnknownSuite("nosuchsuite".into())));
        let exp = SuiteConfig::new("exp-tanh", RingDescriptor::Rational, 1, 1, 1);
        assert!(matches!(run_suite(&exp), Err(UsageError::UnsupportedRing { .. })));
    }

    #[test]
    fn loos_convention_suites_pass() {
        for suite in ["bergman", "thm46"] {
            let mut cfg = SuiteConfig::new(suite, RingDescriptor::Rational, 2, 20, 3);
            cfg.convention = Convention::Loos;
            assert!(run_suite(&cfg).unwrap().ok());
        }
    }

    #[test]
    fn exhaustive_f5_units() {
        assert!(units_are_i11_transversal(5).unwrap());
    }
}
