//! JSON encodings of rings, scalars, matrices, points, group elements,
//! involutions and polarities.
//!
//! Scalars: rationals are strings `"p/q"` (plain integers are also accepted
//! as JSON numbers), prime-field elements are `{"fp": k, "p": p}`, floats
//! are numbers and dual numbers are `{"re": .., "eps": ..}`. Matrices are
//! row-major nested arrays; a `1 × 1` matrix may be given as a bare scalar.

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::algebra::{FormSymmetry, InvolutionSpec};
use crate::error::{Error, Result};
use crate::lie3::{Generator, GroupElement};
use crate::matrix::Matrix;
use crate::projline::{cayley, flip, i11, j_matrix, PolarityMode, PolaritySpec, ProjectivePoint};
use crate::scalar::{parse_rational, rational_string, RingDescriptor, Scalar};

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| invalid(format!("missing field {key:?}")))
}

pub fn ring_to_json(ring: &RingDescriptor) -> Value {
    match ring {
        RingDescriptor::Rational => json!({"kind": "rational"}),
        RingDescriptor::Float64 => json!({"kind": "float64"}),
        RingDescriptor::PrimeField(p) => json!({"kind": "fp", "p": p}),
        RingDescriptor::Dual(b) => json!({"kind": "dual", "base": ring_to_json(b)}),
    }
}

/// Parses `rational`, `float64` or `fp:P`.
pub fn parse_ring(s: &str) -> Result<RingDescriptor> {
    match s.trim() {
        "rational" | "q" | "Q" => Ok(RingDescriptor::Rational),
        "float64" | "float" | "f64" => Ok(RingDescriptor::Float64),
        other => match other.strip_prefix("fp:") {
            Some(p) => RingDescriptor::prime_field(p.parse().map_err(|_| invalid(format!("bad prime {p:?}")))?),
            None => Err(invalid(format!("unknown ring {other:?}"))),
        },
    }
}

/// Accepts the object form or the short string form.
pub fn ring_from_json(v: &Value) -> Result<RingDescriptor> {
    if let Some(s) = v.as_str() {
        return parse_ring(s);
    }
    match field(v, "kind")?.as_str() {
        Some("rational") => Ok(RingDescriptor::Rational),
        Some("float64") => Ok(RingDescriptor::Float64),
        Some("fp") => {
            let p = field(v, "p")?.as_u64().ok_or_else(|| invalid("p must be an integer"))?;
            RingDescriptor::prime_field(p)
        }
        Some("dual") => Ok(RingDescriptor::dual(ring_from_json(field(v, "base")?)?)),
        _ => Err(invalid("unknown ring kind")),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(q) => Value::String(rational_string(q)),
        Scalar::Prime { value, modulus } => json!({"fp": value, "p": modulus}),
        Scalar::Float(x) => json!(x),
        Scalar::Dual(d) => json!({"re": scalar_to_json(&d.re), "eps": scalar_to_json(&d.eps)}),
    }
}

/// Decodes a scalar and interprets it in `ring`.
pub fn scalar_from_json(v: &Value, ring: &RingDescriptor) -> Result<Scalar> {
    match v {
        Value::String(s) => ring.from_rational(&parse_rational(s)?),
        Value::Number(num) => {
            if let Some(k) = num.as_i64() {
                return Ok(ring.from_i64(k));
            }
            let x = num.as_f64().ok_or_else(|| invalid("bad number"))?;
            match ring.base() {
                RingDescriptor::Float64 => Scalar::Float(x).embed(ring),
                _ => {
                    let q = BigRational::from_float(x).ok_or_else(|| invalid("non-finite number"))?;
                    ring.from_rational(&q)
                }
            }
        }
        Value::Object(o) if o.contains_key("fp") => {
            let k = o["fp"].as_i64().ok_or_else(|| invalid("fp must be an integer"))?;
            if let Some(p) = o.get("p").and_then(Value::as_u64) {
                if *ring.base() != RingDescriptor::PrimeField(p) {
                    return Err(Error::RingMismatch(format!("fp:{p} in {ring}")));
                }
            }
            Ok(ring.from_i64(k))
        }
        Value::Object(o) if o.contains_key("re") => {
            let RingDescriptor::Dual(inner) = ring else {
                return Err(Error::RingMismatch(format!("dual number in {ring}")));
            };
            let re = scalar_from_json(&o["re"], inner)?;
            let eps = match o.get("eps") {
                Some(e) => scalar_from_json(e, inner)?,
                None => inner.zero(),
            };
            Scalar::dual_lift(&re, &eps)
        }
        _ => Err(invalid(format!("not a scalar: {v}"))),
    }
}

/// Row-major nested arrays.
pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| scalar_to_json(m.get(i, j))).collect()))
            .collect(),
    )
}

/// A matrix from nested arrays, a bare scalar (`1 × 1`), or an object
/// carrying `entries` (and optionally its own `ring`).
pub fn matrix_from_json(v: &Value, ring: &RingDescriptor) -> Result<Matrix> {
    match v {
        Value::Array(rows) => {
            let rows = rows
                .iter()
                .map(|row| match row {
                    Value::Array(cells) => cells.iter().map(|c| scalar_from_json(c, ring)).collect(),
                    scalar => Ok(vec![scalar_from_json(scalar, ring)?]),
                })
                .collect::<Result<Vec<Vec<Scalar>>>>()?;
            Matrix::from_rows(rows)
        }
        Value::Object(o) if o.contains_key("entries") => {
            let ring = match o.get("ring") {
                Some(r) => ring_from_json(r)?,
                None => ring.clone(),
            };
            matrix_from_json(&o["entries"], &ring)
        }
        scalar => Ok(Matrix::scalar(&scalar_from_json(scalar, ring)?, 1)),
    }
}

/// `{"n", "ring", "entries"}`.
pub fn element_to_json(x: &Matrix) -> Value {
    json!({"n": x.rows(), "ring": ring_to_json(&x.ring()), "entries": matrix_to_json(x)})
}

/// A bare scalar for `1 × 1` matrices, nested arrays otherwise.
pub fn result_to_json(x: &Matrix) -> Value {
    if x.rows() == 1 && x.cols() == 1 {
        scalar_to_json(x.get(0, 0))
    } else {
        matrix_to_json(x)
    }
}

/// `{"n", "ring", "rep"}`.
pub fn point_to_json(p: &ProjectivePoint) -> Value {
    json!({"n": p.n(), "ring": ring_to_json(&p.ring()), "rep": matrix_to_json(p.rep())})
}

/// A point from `{"rep": ..}`, or from chart coordinates `{"chart": z}`.
pub fn point_from_json(v: &Value, ring: &RingDescriptor) -> Result<ProjectivePoint> {
    if let Some(z) = v.get("chart") {
        return Ok(crate::projline::gamma_chart(&matrix_from_json(z, ring)?));
    }
    let ring = match v.get("ring") {
        Some(r) => ring_from_json(r)?,
        None => ring.clone(),
    };
    ProjectivePoint::new(matrix_from_json(field(v, "rep")?, &ring)?)
}

pub fn group_to_json(g: &GroupElement) -> Value {
    let mut o = Map::new();
    o.insert("matrix".into(), matrix_to_json(g.matrix()));
    if let Some(word) = g.word() {
        let w = word.iter().map(|gen| json!({"deg": gen.degree, "v": matrix_to_json(&gen.v)})).collect();
        o.insert("word".into(), Value::Array(w));
    }
    Value::Object(o)
}

/// A group element from a named matrix (`"J"`, `"C"`, `"F"`, `"I11"`),
/// `{"matrix": ..}`, `{"blocks": {"a", "b", "c", "d"}}` or
/// `{"word": [{"deg": ±1, "v": ..}]}`.
pub fn group_from_json(v: &Value, ring: &RingDescriptor, n: usize) -> Result<GroupElement> {
    if let Some(name) = v.as_str() {
        return match name {
            "J" => Ok(j_matrix(ring, n)),
            "C" => Ok(cayley(ring, n)),
            "F" => Ok(flip(ring, n)),
            "I11" => Ok(i11(ring, n)),
            "1" | "identity" => Ok(GroupElement::identity(ring, n)),
            _ => Err(invalid(format!("unknown group element {name:?}"))),
        };
    }
    if let Some(w) = v.get("word") {
        let word = w
            .as_array()
            .ok_or_else(|| invalid("word must be an array"))?
            .iter()
            .map(|g| {
                let degree = match field(g, "deg")?.as_i64() {
                    Some(1) => 1,
                    Some(-1) => -1,
                    _ => return Err(invalid("generator degree must be ±1")),
                };
                Ok(Generator { degree, v: matrix_from_json(field(g, "v")?, ring)? })
            })
            .collect::<Result<Vec<_>>>()?;
        return GroupElement::from_word(ring, n, word);
    }
    if let Some(b) = v.get("blocks") {
        let get = |k: &str| matrix_from_json(field(b, k)?, ring);
        return GroupElement::from_blocks(&get("a")?, &get("b")?, &get("c")?, &get("d")?);
    }
    let m = match v.get("matrix") {
        Some(m) => m,
        None => v,
    };
    GroupElement::new(matrix_from_json(m, ring)?)
}

pub fn involution_to_json(inv: &InvolutionSpec) -> Value {
    match inv {
        InvolutionSpec::Transpose => json!({"kind": "transpose"}),
        InvolutionSpec::FormAdjoint { form, symmetry, .. } => json!({
            "kind": "form_adjoint",
            "B": matrix_to_json(form),
            "symmetry": match symmetry { FormSymmetry::Symmetric => "symmetric", FormSymmetry::Skew => "skew" },
        }),
    }
}

pub fn involution_from_json(v: &Value, ring: &RingDescriptor) -> Result<InvolutionSpec> {
    let kind = match v {
        Value::String(s) => s.as_str(),
        _ => field(v, "kind")?.as_str().unwrap_or(""),
    };
    match kind {
        "transpose" => Ok(InvolutionSpec::Transpose),
        "form_adjoint" => {
            let form = matrix_from_json(field(v, "B")?, ring)?;
            let symmetry = match v.get("symmetry").and_then(Value::as_str) {
                Some("skew") => FormSymmetry::Skew,
                Some("symmetric") | None => FormSymmetry::Symmetric,
                Some(other) => return Err(invalid(format!("unknown symmetry {other:?}"))),
            };
            InvolutionSpec::form_adjoint(form, symmetry)
        }
        other => Err(invalid(format!("unknown involution {other:?}"))),
    }
}

pub fn polarity_to_json(spec: &PolaritySpec) -> Value {
    let mut o = Map::new();
    match &spec.mode {
        PolarityMode::Linear { s } => {
            o.insert("mode".into(), json!("linear"));
            o.insert("S".into(), matrix_to_json(s.matrix()));
        }
        PolarityMode::Semilinear { j, s, involution } => {
            o.insert("mode".into(), json!("semilinear"));
            o.insert("j".into(), json!(j));
            o.insert("S".into(), matrix_to_json(s.matrix()));
            o.insert("involution".into(), involution_to_json(involution));
        }
    }
    if let Some(h) = &spec.h {
        o.insert("H".into(), matrix_to_json(h));
    }
    Value::Object(o)
}

/// `{"mode": "linear" | "semilinear", "S"?, "j"?, "involution"?, "H"?}`.
/// `S` defaults to the flip `F`.
pub fn polarity_from_json(v: &Value, ring: &RingDescriptor, n: usize) -> Result<PolaritySpec> {
    let s = match v.get("S") {
        Some(s) => group_from_json(s, ring, n)?,
        None => flip(ring, n),
    };
    let mut spec = match v.get("mode").and_then(Value::as_str).unwrap_or("linear") {
        "linear" => PolaritySpec::linear(s),
        "semilinear" => {
            let j = match v.get("j").and_then(Value::as_u64) {
                Some(j @ 1..=4) => j as u8,
                _ => return Err(invalid("semilinear polarity needs j in 1..=4")),
            };
            let involution = match v.get("involution") {
                Some(i) => involution_from_json(i, ring)?,
                None => InvolutionSpec::Transpose,
            };
            PolaritySpec::semilinear(j, s, involution)
        }
        other => return Err(invalid(format!("unknown polarity mode {other:?}"))),
    };
    if let Some(h) = v.get("H") {
        spec = spec.with_modification(matrix_from_json(h, ring)?);
    }
    Ok(spec)
}
