//! The scalar ring tower.
//!
//! A [`Scalar`] lives in one of the base rings (arbitrary-precision
//! rationals, a prime field `F_p` with `p` odd, or binary64 floats) or in a
//! finite stack of dual-number extensions `R[ε]` over one of them. Dual
//! layers are stored structurally as `(re, eps)` pairs; the outermost layer
//! is always the most recently added one.
//!
//! Arithmetic between scalars of different dual depth over the same base
//! embeds the shallower operand (`x ↦ x + 0·ε`), so constants and
//! base-ring data can be mixed freely with lifted values. Mixing different
//! base rings is a programming error and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Magnitude below which a float is not treated as a unit.
pub const DEFAULT_UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Rational,
    Float64,
    PrimeField(u64),
    Dual(Box<RingDescriptor>),
}

impl RingDescriptor {
    /// `F_p` for an odd prime `p`; 2 must be a unit in every supported ring.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p < 3 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not an odd prime below 2^32")));
        }
        Ok(RingDescriptor::PrimeField(p))
    }

    pub fn dual(base: RingDescriptor) -> Self {
        RingDescriptor::Dual(Box::new(base))
    }

    /// Number of dual layers.
    pub fn depth(&self) -> usize {
        match self {
            RingDescriptor::Dual(b) => 1 + b.depth(),
            _ => 0,
        }
    }

    /// The innermost (non-dual) ring.
    pub fn base(&self) -> &RingDescriptor {
        match self {
            RingDescriptor::Dual(b) => b.base(),
            other => other,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.base(), RingDescriptor::Float64)
    }

    pub fn is_dual(&self) -> bool {
        matches!(self, RingDescriptor::Dual(_))
    }

    /// The deeper of two rings over a common base.
    pub fn join(&self, other: &RingDescriptor) -> Result<RingDescriptor> {
        if self.base() != other.base() {
            return Err(Error::RingMismatch(format!("{self} vs {other}")));
        }
        Ok(if self.depth() >= other.depth() { self.clone() } else { other.clone() })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, k: i64) -> Scalar {
        match self {
            RingDescriptor::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(k))),
            RingDescriptor::Float64 => Scalar::Float(k as f64),
            RingDescriptor::PrimeField(p) => Scalar::Prime {
                value: k.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
            RingDescriptor::Dual(b) => Scalar::Dual(Box::new(DualPair {
                re: b.from_i64(k),
                eps: b.zero(),
            })),
        }
    }

    /// Image of a rational number; fails in `F_p` when `p` divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        Ok(match self {
            RingDescriptor::Rational => Scalar::Rational(q.clone()),
            RingDescriptor::Float64 => Scalar::Float(q.to_f64().unwrap_or(f64::NAN)),
            RingDescriptor::PrimeField(p) => {
                let m = BigInt::from(*p);
                let num = q.numer().mod_floor(&m).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&m).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::NotAUnit);
                }
                Scalar::Prime {
                    value: mul_mod(num, pow_mod(den, p - 2, *p), *p),
                    modulus: *p,
                }
            }
            RingDescriptor::Dual(b) => Scalar::Dual(Box::new(DualPair {
                re: b.from_rational(q)?,
                eps: b.zero(),
            })),
        })
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Rational => write!(f, "rational"),
            RingDescriptor::Float64 => write!(f, "float64"),
            RingDescriptor::PrimeField(p) => write!(f, "fp:{p}"),
            RingDescriptor::Dual(b) => write!(f, "dual({b})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualPair {
    pub re: Scalar,
    pub eps: Scalar,
}

#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
    Float(f64),
    Dual(Box<DualPair>),
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(k: i64) -> Scalar {
        Scalar::rational(k, 1)
    }

    pub fn ring(&self) -> RingDescriptor {
        match self {
            Scalar::Rational(_) => RingDescriptor::Rational,
            Scalar::Float(_) => RingDescriptor::Float64,
            Scalar::Prime { modulus, .. } => RingDescriptor::PrimeField(*modulus),
            Scalar::Dual(d) => RingDescriptor::dual(d.re.ring()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Scalar::Dual(d) => 1 + d.re.depth(),
            _ => 0,
        }
    }

    fn same_base(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Dual(d), _) => d.re.same_base(other),
            (_, Scalar::Dual(d)) => self.same_base(&d.re),
            (Scalar::Rational(_), Scalar::Rational(_)) | (Scalar::Float(_), Scalar::Float(_)) => true,
            (Scalar::Prime { modulus: p, .. }, Scalar::Prime { modulus: q, .. }) => p == q,
            _ => false,
        }
    }

    pub fn zero_like(&self) -> Scalar {
        self.from_i64_like(0)
    }

    pub fn one_like(&self) -> Scalar {
        self.from_i64_like(1)
    }

    /// The integer `k` in the ring of `self`.
    pub fn from_i64_like(&self, k: i64) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::from_integer(BigInt::from(k))),
            Scalar::Float(_) => Scalar::Float(k as f64),
            Scalar::Prime { modulus, .. } => Scalar::Prime {
                value: k.rem_euclid(*modulus as i64) as u64,
                modulus: *modulus,
            },
            Scalar::Dual(d) => Scalar::Dual(Box::new(DualPair {
                re: d.re.from_i64_like(k),
                eps: d.re.zero_like(),
            })),
        }
    }

    /// `1/2` in the ring of `self`.
    pub fn half_like(&self) -> Scalar {
        self.from_i64_like(2).inv().expect("2 is a unit in every supported ring")
    }

    /// Embeds into `ring`, which must be at least as deep and share the base.
    pub fn embed(&self, ring: &RingDescriptor) -> Result<Scalar> {
        if !self.ring().base().eq(ring.base()) {
            return Err(Error::RingMismatch(format!("{} into {}", self.ring(), ring)));
        }
        let mut out = self.clone();
        let mut d = out.depth();
        if d > ring.depth() {
            return Err(Error::RingMismatch(format!("cannot embed {} into {}", self.ring(), ring)));
        }
        while d < ring.depth() {
            let z = out.zero_like();
            out = Scalar::Dual(Box::new(DualPair { re: out, eps: z }));
            d += 1;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Dual(d) => d.re.is_zero() && d.eps.is_zero(),
        }
    }

    /// Unit test with the default float tolerance.
    pub fn is_unit(&self) -> bool {
        self.is_unit_tol(DEFAULT_UNIT_TOLERANCE)
    }

    /// A dual number is a unit iff its real part is; floats need `|x| > tol`.
    pub fn is_unit_tol(&self, tol: f64) -> bool {
        match self {
            Scalar::Rational(q) => !q.is_zero(),
            Scalar::Float(x) => x.abs() > tol,
            Scalar::Prime { value, .. } => *value != 0,
            Scalar::Dual(d) => d.re.is_unit_tol(tol),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Float(x) => Scalar::Float(1.0 / x),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Dual(d) => {
                // (a + bε)^{-1} = a^{-1} - a^{-2} b ε
                let ai = d.re.inv()?;
                let eps = -(&(&ai * &ai) * &d.eps);
                Scalar::Dual(Box::new(DualPair { re: ai, eps }))
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// `a + bε` over the common ring of `a` and `b`.
    pub fn dual_lift(a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if a.ring() != b.ring() {
            return Err(Error::RingMismatch(format!("{} vs {}", a.ring(), b.ring())));
        }
        Ok(Scalar::Dual(Box::new(DualPair { re: a.clone(), eps: b.clone() })))
    }

    /// Splits off the outermost dual layer.
    pub fn dual_parts(&self) -> Result<(Scalar, Scalar)> {
        match self {
            Scalar::Dual(d) => Ok((d.re.clone(), d.eps.clone())),
            _ => Err(Error::NotDual),
        }
    }

    /// Rough size, used for float pivoting and tolerance checks.
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Rational(q) => q.to_f64().map(f64::abs).unwrap_or(f64::INFINITY),
            Scalar::Float(x) => x.abs(),
            Scalar::Prime { value, .. } => *value as f64,
            Scalar::Dual(d) => d.re.magnitude().max(d.eps.magnitude()),
        }
    }

    /// Numeric value of a base-ring rational or float.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rational(q) => q.to_f64(),
            Scalar::Float(x) => Some(*x),
            _ => None,
        }
    }

    /// Magnitude of `self - other` for float rings, `0`/`inf` for exact rings.
    pub fn distance(&self, other: &Scalar) -> f64 {
        let d = self - other;
        if self.ring().is_exact() {
            if d.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d.magnitude()
        }
    }

    fn add_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) => {
                assert_eq!(p, q, "ring mismatch: F_{p} vs F_{q}");
                Scalar::Prime { value: (a + b) % p, modulus: *p }
            }
            (Scalar::Dual(x), Scalar::Dual(y)) => match self.depth().cmp(&o.depth()) {
                std::cmp::Ordering::Equal => dual(x.re.add_ref(&y.re), x.eps.add_ref(&y.eps)),
                std::cmp::Ordering::Greater => dual(x.re.add_ref(o), x.eps.clone()),
                std::cmp::Ordering::Less => dual(self.add_ref(&y.re), y.eps.clone()),
            },
            (Scalar::Dual(x), _) => dual(x.re.add_ref(o), x.eps.clone()),
            (_, Scalar::Dual(y)) => dual(self.add_ref(&y.re), y.eps.clone()),
            _ => panic!("ring mismatch: {} vs {}", self.ring(), o.ring()),
        }
    }

    fn mul_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) => {
                assert_eq!(p, q, "ring mismatch: F_{p} vs F_{q}");
                Scalar::Prime { value: mul_mod(*a, *b, *p), modulus: *p }
            }
            (Scalar::Dual(x), Scalar::Dual(y)) => match self.depth().cmp(&o.depth()) {
                // (a + bε)(c + dε) = ac + (ad + bc)ε
                std::cmp::Ordering::Equal => dual(
                    x.re.mul_ref(&y.re),
                    x.re.mul_ref(&y.eps).add_ref(&x.eps.mul_ref(&y.re)),
                ),
                std::cmp::Ordering::Greater => dual(x.re.mul_ref(o), x.eps.mul_ref(o)),
                std::cmp::Ordering::Less => dual(self.mul_ref(&y.re), self.mul_ref(&y.eps)),
            },
            (Scalar::Dual(x), _) => dual(x.re.mul_ref(o), x.eps.mul_ref(o)),
            (_, Scalar::Dual(y)) => dual(self.mul_ref(&y.re), self.mul_ref(&y.eps)),
            _ => panic!("ring mismatch: {} vs {}", self.ring(), o.ring()),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Float(a) => Scalar::Float(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Dual(x) => dual(x.re.neg_ref(), x.eps.neg_ref()),
        }
    }
}

fn dual(re: Scalar, eps: Scalar) -> Scalar {
    Scalar::Dual(Box::new(DualPair { re, eps }))
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if !self.same_base(other) {
            return false;
        }
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            (Scalar::Prime { value: a, .. }, Scalar::Prime { value: b, .. }) => a == b,
            (Scalar::Dual(x), Scalar::Dual(y)) => match self.depth().cmp(&other.depth()) {
                std::cmp::Ordering::Equal => x.re == y.re && x.eps == y.eps,
                std::cmp::Ordering::Greater => x.re == *other && x.eps.is_zero(),
                std::cmp::Ordering::Less => *self == y.re && y.eps.is_zero(),
            },
            (Scalar::Dual(x), _) => x.re == *other && x.eps.is_zero(),
            (_, Scalar::Dual(y)) => *self == y.re && y.eps.is_zero(),
            _ => false,
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$imp(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Mul, mul, mul_ref);

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Sub<Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs.neg_ref())
    }
}

impl<'a> Sub<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{x}"),
            Scalar::Prime { value, modulus } => write!(f, "{value} (mod {modulus})"),
            Scalar::Dual(d) => write!(f, "({} + {}ε)", d.re, d.eps),
        }
    }
}

/// Canonical string for a rational: `"n"` or `"p/q"` with `q > 0`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"n"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
