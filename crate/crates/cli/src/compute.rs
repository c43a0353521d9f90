//! One-shot computations from JSON requests.
//!
//! A request is an object with an `"op"` field plus op-specific arguments.
//! `"ring"` (default from the command line, else rational), `"n"` (default
//! inferred from the arguments) and `"convention"` apply to every op.

use jpgeom::algebra::InvolutionSpec;
use jpgeom::calculus::{self, derivative_check, dual_derivative, MapHandle};
use jpgeom::jordan::{Flavor, JordanContext};
use jpgeom::json::{
    group_from_json, involution_from_json, matrix_from_json, matrix_to_json, point_from_json, point_to_json,
    polarity_from_json, result_to_json, ring_from_json, scalar_from_json,
};
use jpgeom::lie3::{act, act_fractional, denominators};
use jpgeom::projline::{
    act_frac, cayley, chart_coords, classify_point, flip, gamma_chart, i11, mu_dilation, o_minus, phi_involution,
    phi_matrix, PolaritySpec,
};
use jpgeom::sample::{retry, Sampler};
use jpgeom::symspace::{GroupKind, SpacePoint, SymmetricSpace, DEFAULT_SERIES_ORDER};
use jpgeom::verify::Convention;
use jpgeom::{Error, Matrix, RingDescriptor};
use serde_json::{json, Value};

pub enum CliError {
    /// The request is malformed: exit code 2.
    Usage(String),
    /// A domain error from the computation: exit code 1.
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type Out = Result<Value, CliError>;

pub struct Defaults {
    pub ring: RingDescriptor,
    pub convention: Convention,
}

/// Decoding errors are usage errors.
fn arg<T>(r: jpgeom::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

struct Request<'a> {
    v: &'a Value,
    ring: RingDescriptor,
    n: usize,
    convention: Convention,
}

impl<'a> Request<'a> {
    fn new(v: &'a Value, defaults: &Defaults) -> Result<Request<'a>, CliError> {
        let ring = match v.get("ring") {
            Some(r) => arg(ring_from_json(r))?,
            None => defaults.ring.clone(),
        };
        let convention = match v.get("convention").and_then(Value::as_str) {
            Some(c) => c.parse().map_err(CliError::Usage)?,
            None => defaults.convention,
        };
        let n = match v.get("n") {
            Some(n) => n.as_u64().filter(|&n| n > 0).ok_or_else(|| CliError::Usage("n must be a positive integer".into()))?
                as usize,
            None => infer_n(v).unwrap_or(1),
        };
        Ok(Request { v, ring, n, convention })
    }

    fn field(&self, key: &str) -> Result<&'a Value, CliError> {
        self.v.get(key).ok_or_else(|| CliError::Usage(format!("missing field {key:?}")))
    }

    fn matrix(&self, key: &str) -> Result<Matrix, CliError> {
        let m = arg(matrix_from_json(self.field(key)?, &self.ring))?;
        if m.rows() != self.n || m.cols() != self.n {
            return Err(CliError::Usage(format!("{key} must be {n}x{n}", n = self.n)));
        }
        Ok(m)
    }

    fn group(&self, key: &str) -> Result<jpgeom::lie3::GroupElement, CliError> {
        let g = arg(group_from_json(self.field(key)?, &self.ring, self.n))?;
        if g.n() != self.n {
            return Err(CliError::Usage(format!("{key} must be {m}x{m}", m = 2 * self.n)));
        }
        Ok(g)
    }

    fn point(&self, key: &str) -> Result<jpgeom::projline::ProjectivePoint, CliError> {
        let v = self.field(key)?;
        if v.get("rep").is_some() || v.get("chart").is_some() {
            arg(point_from_json(v, &self.ring))
        } else {
            Ok(gamma_chart(&self.matrix(key)?))
        }
    }

    fn involution(&self) -> Result<InvolutionSpec, CliError> {
        match self.v.get("involution") {
            Some(i) => arg(involution_from_json(i, &self.ring)),
            None => Ok(InvolutionSpec::Transpose),
        }
    }

    fn context(&self) -> Result<Context, CliError> {
        let c = self.v.get("context").cloned().unwrap_or_else(|| json!({"kind": "projective"}));
        let kind = c.get("kind").and_then(Value::as_str).unwrap_or("projective");
        let inv = match c.get("involution") {
            Some(i) => Some(arg(involution_from_json(i, &self.ring))?),
            None => None,
        };
        let flavor = || match (c.get("flavor").and_then(Value::as_str).unwrap_or("full"), &inv) {
            ("full", _) => Ok(Flavor::Full),
            ("hermitian", i) => Ok(Flavor::Hermitian(i.clone().unwrap_or(InvolutionSpec::Transpose))),
            ("antihermitian", i) => Ok(Flavor::Antihermitian(i.clone().unwrap_or(InvolutionSpec::Transpose))),
            (other, _) => Err(CliError::Usage(format!("unknown flavor {other:?}"))),
        };
        match kind {
            "jordan" => Ok(Context::Jordan(JordanContext::new(self.ring.clone(), self.n, flavor()?)?)),
            "jordan_units" => {
                let ctx = JordanContext::new(self.ring.clone(), self.n, flavor()?)?;
                Ok(Context::Space(SymmetricSpace::jordan_units(ctx)?))
            }
            "group" => {
                let kind = match inv {
                    Some(i) => GroupKind::Unitary(i),
                    None => GroupKind::FullLinear,
                };
                Ok(Context::Space(SymmetricSpace::group(kind, self.ring.clone(), self.n)?))
            }
            "projective" => {
                let spec = match c.get("polarity") {
                    Some(p) => arg(polarity_from_json(p, &self.ring, self.n))?,
                    None => PolaritySpec::linear(flip(&self.ring, self.n)),
                };
                let base = match c.get("base") {
                    Some(b) => arg(point_from_json(b, &self.ring))?,
                    None => o_minus(&self.ring, self.n),
                };
                Ok(Context::Space(SymmetricSpace::projective(spec, base)?))
            }
            other => Err(CliError::Usage(format!("unknown context kind {other:?}"))),
        }
    }

    fn jordan_context(&self) -> Result<JordanContext, CliError> {
        match self.v.get("context") {
            None => Ok(JordanContext::full(self.ring.clone(), self.n)),
            Some(_) => match self.context()? {
                Context::Jordan(ctx) => Ok(ctx),
                Context::Space(s) => match s.variant() {
                    jpgeom::symspace::SpaceVariant::JordanUnits(ctx) => Ok(ctx.clone()),
                    _ => Err(CliError::Usage("this op needs a Jordan context".into())),
                },
            },
        }
    }

    fn space(&self) -> Result<SymmetricSpace, CliError> {
        match self.context()? {
            Context::Space(s) => Ok(s),
            Context::Jordan(ctx) => Ok(SymmetricSpace::jordan_units(ctx)?),
        }
    }

    /// A point of `space`: a bare matrix is read in the space's base chart.
    fn space_point(&self, space: &SymmetricSpace, key: &str) -> Result<SpacePoint, CliError> {
        let v = self.field(key)?;
        if v.get("rep").is_some() || v.get("chart").is_some() {
            return Ok(SpacePoint::Projective(self.point(key)?));
        }
        Ok(space.chart().point(&self.matrix(key)?))
    }

    fn signed(&self, y: Matrix) -> Matrix {
        match self.convention {
            Convention::Ad => y,
            Convention::Loos => -&y,
        }
    }
}

enum Context {
    Jordan(JordanContext),
    Space(SymmetricSpace),
}

/// Size of the first matrix-valued argument, if any.
fn infer_n(v: &Value) -> Option<usize> {
    for key in ["x", "y", "v", "u", "g", "X", "z"] {
        if let Some(Value::Array(rows)) = v.get(key) {
            let n = rows.len();
            return Some(if key == "g" || key == "X" { n / 2 } else { n });
        }
    }
    for key in ["E", "x", "y", "a"] {
        if let Some(rep) = v.get(key).and_then(|p| p.get("rep")).and_then(Value::as_array) {
            return Some(rep.len() / 2);
        }
    }
    None
}

fn space_point_json(space: &SymmetricSpace, p: &SpacePoint) -> Value {
    match p {
        SpacePoint::Element(x) => result_to_json(x),
        SpacePoint::Projective(e) => {
            let mut v = point_to_json(e);
            if let Ok(z) = space.chart().coords(p) {
                v["chart"] = result_to_json(&z);
            }
            v
        }
    }
}

pub fn compute(v: &Value, defaults: &Defaults) -> Out {
    let op = v.get("op").and_then(Value::as_str).ok_or_else(|| CliError::Usage("missing op".into()))?;
    let r = Request::new(v, defaults)?;
    match op {
        "quasi_inverse" => {
            let ctx = r.jordan_context()?;
            let (x, y) = (r.matrix("x")?, r.matrix("y")?);
            let q = ctx.quasi_inverse(&x, &r.signed(y))?;
            Ok(json!({"op": op, "convention": r.convention, "result": result_to_json(&q)}))
        }
        "bergman" => {
            let ctx = r.jordan_context()?;
            let (x, y) = (r.matrix("x")?, r.matrix("y")?);
            let b = ctx.bergman_operator(&x, &r.signed(y))?;
            let mut out = json!({"op": op, "convention": r.convention, "operator": matrix_to_json(b.matrix())});
            if r.v.get("z").is_some() {
                out["result"] = result_to_json(&ctx.apply(&b, &r.matrix("z")?)?);
            }
            Ok(out)
        }
        "act" => {
            let (g, x) = (r.group("g")?, r.matrix("x")?);
            Ok(json!({"op": op, "result": result_to_json(&act(&g, &x)?)}))
        }
        "act_frac" => {
            let g = r.group("g")?;
            if r.v.get("x").is_some() {
                return Ok(json!({"op": op, "result": result_to_json(&act_fractional(&g, &r.matrix("x")?)?)}));
            }
            let e = act_frac(&g, &r.point("E")?);
            let mut out = json!({"op": op, "result": point_to_json(&e)});
            if let Ok(z) = chart_coords(&e) {
                out["chart"] = result_to_json(&z);
            }
            Ok(out)
        }
        "denominators" => {
            let (g, x) = (r.group("g")?, r.matrix("x")?);
            let d = denominators(&g, &x)?;
            Ok(json!({"op": op, "d": matrix_to_json(d.d.matrix()), "c": matrix_to_json(d.c.matrix()), "n": result_to_json(&d.n)}))
        }
        "sym_mul" => {
            let space = r.space()?;
            let (x, y) = (r.space_point(&space, "x")?, r.space_point(&space, "y")?);
            Ok(json!({"op": op, "result": space_point_json(&space, &space.sym_mul(&x, &y)?)}))
        }
        "lts" => {
            let space = r.space()?;
            let (u, w, x) = (r.matrix("u")?, r.matrix("w")?, r.matrix("v")?);
            let result = match r.v.get("method").and_then(Value::as_str).unwrap_or("closed") {
                "closed" => space.lts_bracket(&u, &x, &w)?,
                "numeric" => space.lts_numeric(&u, &x, &w)?,
                other => return Err(CliError::Usage(format!("unknown method {other:?}"))),
            };
            Ok(json!({"op": op, "result": result_to_json(&result)}))
        }
        "exp" => {
            let space = r.space()?;
            let order = r.v.get("order").and_then(Value::as_u64).map(|o| o as usize).unwrap_or(DEFAULT_SERIES_ORDER);
            let p = space.exp_tanh(&r.matrix("v")?, order)?;
            Ok(json!({"op": op, "order": order, "result": space_point_json(&space, &p)}))
        }
        "cayley" => {
            let c = cayley(&r.ring, r.n);
            if r.v.get("x").is_some() {
                let e = act_frac(&c, &r.point("x")?);
                return Ok(json!({"op": op, "result": point_to_json(&e)}));
            }
            Ok(json!({"op": op, "result": matrix_to_json(c.matrix())}))
        }
        "cayley_identity" => {
            let c = cayley(&r.ring, r.n);
            let holds = c.inverse().compose(&i11(&r.ring, r.n)).compose(&c) == flip(&r.ring, r.n);
            Ok(json!({"op": op, "holds": holds}))
        }
        "phi" => {
            let j = match r.field("j")?.as_u64() {
                Some(j @ 1..=4) => j as u8,
                _ => return Err(CliError::Usage("j must be 1, 2, 3 or 4".into())),
            };
            let inv = r.involution()?;
            if let Some(x) = r.v.get("X") {
                let x = arg(matrix_from_json(x, &r.ring))?;
                return Ok(json!({"op": op, "result": matrix_to_json(&phi_matrix(j, &inv, &x)?)}));
            }
            let e = phi_involution(j, &inv, &r.point("E")?)?;
            let mut out = json!({"op": op, "result": point_to_json(&e)});
            if let Ok(z) = chart_coords(&e) {
                out["chart"] = result_to_json(&z);
            }
            Ok(out)
        }
        "classify" => {
            let c = classify_point(&r.involution()?, &r.point("E")?)?;
            Ok(json!({"op": op, "hermitian": c.hermitian, "antihermitian": c.antihermitian, "unitary": c.unitary}))
        }
        "mu" => {
            let s = arg(scalar_from_json(r.field("r")?, &r.ring))?;
            let e = mu_dilation(&s, &r.point("x")?, &r.point("a")?, &r.point("y")?)?;
            Ok(json!({"op": op, "result": point_to_json(&e)}))
        }
        "derivative" => {
            let (f, _) = named_map(&r)?;
            let d = dual_derivative(&f, &r.matrix("x")?, &r.matrix("v")?)?;
            Ok(json!({"op": op, "map": f.name(), "result": result_to_json(&d)}))
        }
        "derivative_check" => derivative_check_op(&r),
        other => Err(CliError::Usage(format!("unknown op {other:?}"))),
    }
}

/// A built-in map and its closed-form derivative `(x, v) ↦ df(x)v`.
fn named_map(r: &Request) -> Result<(MapHandle, MapHandle), CliError> {
    let name = r.field("map")?.as_str().ok_or_else(|| CliError::Usage("map must be a string".into()))?;
    Ok(match name {
        "inverse" => (
            calculus::inversion(),
            MapHandle::new("-x^-1 v x^-1", 2, |a| {
                let xi = a[0].inverse()?;
                Ok(-&(&(&xi * &a[1]) * &xi))
            }),
        ),
        "square" => (calculus::squaring(), MapHandle::new("xv + vx", 2, |a| Ok(&(&a[0] * &a[1]) + &(&a[1] * &a[0])))),
        "jordan_inverse" => {
            let ctx = r.jordan_context()?;
            let c = ctx.clone();
            let expected = MapHandle::new("-Q(x)^-1 v", 2, move |a| {
                let q = c.rep_operators(&a[0], None)?.q;
                Ok(-&c.solve(&q, &a[1])?)
            });
            (calculus::jordan_inversion(ctx), expected)
        }
        "act" => {
            let g = r.group("g")?;
            let h = g.clone();
            let expected = MapHandle::new("d_g(x)^-1 v", 2, move |a| denominators(&h, &a[0])?.d.inverse()?.apply(&a[1]));
            (calculus::action(g), expected)
        }
        other => return Err(CliError::Usage(format!("unknown map {other:?}"))),
    })
}

fn derivative_check_op(r: &Request) -> Out {
    let (f, expected) = named_map(r)?;
    let samples = r.v.get("samples").and_then(Value::as_u64).unwrap_or(100);
    let tol = r.v.get("tol").and_then(Value::as_f64).unwrap_or(1e-9);
    let seed = r.v.get("seed").and_then(Value::as_u64).unwrap_or(0);
    // Jordan inversion samples inside its context; the other maps on all of M_n.
    let ctx = match f.name() {
        "jordan_inverse" => Some(r.jordan_context()?),
        _ => None,
    };
    let mut points = Vec::new();
    for k in 0..samples {
        let mut s = Sampler::for_trial(r.ring.clone(), seed, k);
        let pair = match &ctx {
            Some(c) => s.jordan_unit(c).map(|x| (x, s.element_of(c))),
            None => retry(|| {
                let x = s.square(r.n);
                f.call(&x).ok().map(|_| x)
            })
            .map(|x| (x, s.square(r.n))),
        };
        points.extend(pair);
    }
    let report = derivative_check(&f, &expected, &points, tol);
    Ok(json!({
        "op": "derivative_check",
        "map": f.name(),
        "samples": report.samples,
        "agreeing": report.agreeing,
        "errors": report.errors,
        "max_deviation": if report.max_deviation.is_finite() { json!(report.max_deviation) } else { Value::Null },
        "passed": report.passed(),
    }))
}
