//! Seeded random inputs. Entries come from a small integer box interpreted
//! in the target ring; every trial gets its own ChaCha stream so runs are
//! reproducible regardless of trial order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, InvolutionSpec};
use crate::jordan::JordanContext;
use crate::lie3::{Generator, GroupElement};
use crate::matrix::Matrix;
use crate::projline::ProjectivePoint;
use crate::scalar::{RingDescriptor, Scalar};

/// Retry budget for rejection sampling.
pub const RETRY_CAP: usize = 1000;

/// Default half-width of the integer box.
pub const DEFAULT_BOX: i64 = 3;

pub struct Sampler {
    rng: ChaCha8Rng,
    ring: RingDescriptor,
    bound: i64,
}

impl Sampler {
    pub fn new(ring: RingDescriptor, seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), ring, bound: DEFAULT_BOX }
    }

    /// The sampler for trial `trial` of a run seeded with `seed`.
    pub fn for_trial(ring: RingDescriptor, seed: u64, trial: u64) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Sampler { rng, ring, bound: DEFAULT_BOX }
    }

    pub fn with_bound(mut self, bound: i64) -> Sampler {
        self.bound = bound;
        self
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn int(&mut self) -> i64 {
        self.rng.gen_range(-self.bound..=self.bound)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn float_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn scalar(&mut self) -> Scalar {
        let k = self.int();
        self.ring.from_i64(k)
    }

    /// A nonzero unit from the box.
    pub fn unit(&mut self) -> Scalar {
        retry(|| {
            let s = self.scalar();
            s.is_unit().then_some(s)
        })
        .expect("the box contains ±1")
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| {
            let k = self.rng.gen_range(-self.bound..=self.bound);
            self.ring.from_i64(k)
        })
    }

    pub fn square(&mut self, n: usize) -> AlgebraElement {
        self.matrix(n, n)
    }

    pub fn invertible(&mut self, n: usize) -> Option<AlgebraElement> {
        retry(|| {
            let m = self.square(n);
            m.is_invertible().then_some(m)
        })
    }

    /// A random element of `V` from random integer coordinates.
    pub fn element_of(&mut self, ctx: &JordanContext) -> AlgebraElement {
        let c = self.matrix(ctx.dim(), 1);
        ctx.element(&c).expect("coordinates have the right length")
    }

    /// A random element of `V` with invertible `Q`.
    pub fn jordan_unit(&mut self, ctx: &JordanContext) -> Option<AlgebraElement> {
        retry(|| {
            let x = self.element_of(ctx);
            ctx.rep_operators(&x, None).ok()?.q.is_invertible().then_some(x)
        })
    }

    pub fn hermitian(&mut self, inv: &InvolutionSpec, n: usize) -> AlgebraElement {
        let x = self.square(n);
        &x + &inv.apply(&x)
    }

    pub fn antihermitian(&mut self, inv: &InvolutionSpec, n: usize) -> AlgebraElement {
        let x = self.square(n);
        &x - &inv.apply(&x)
    }

    /// A unitary element: a product of Cayley images `(1 + a)(1 - a)⁻¹`
    /// of anti-hermitian `a`, times `diag(±1, …)` when that is unitary too.
    pub fn unitary(&mut self, inv: &InvolutionSpec, n: usize) -> Option<AlgebraElement> {
        let one = Matrix::identity(&self.ring, n);
        let mut u = one.clone();
        for _ in 0..2 {
            let c = retry(|| {
                let a = self.antihermitian(inv, n);
                let den = (&one - &a).inverse().ok()?;
                Some(&(&one + &a) * &den)
            })?;
            u = &u * &c;
        }
        if self.coin() {
            let mut r = one.clone();
            r.set(0, 0, -self.ring.one());
            if &inv.apply(&r) * &r == one {
                u = &u * &r;
            }
        }
        Some(u)
    }

    /// A random `2n × n` matrix of full rank.
    pub fn point(&mut self, n: usize) -> Option<ProjectivePoint> {
        retry(|| ProjectivePoint::new(self.matrix(2 * n, n)).ok())
    }

    /// A random word of elementary generators of length `1..=max_len`.
    pub fn word(&mut self, n: usize, max_len: usize) -> GroupElement {
        let len = self.int_in(1, max_len as i64) as usize;
        let word = (0..len)
            .map(|_| Generator { degree: if self.coin() { 1 } else { -1 }, v: self.square(n) })
            .collect();
        GroupElement::from_word(&self.ring, n, word).expect("elementary matrices are invertible")
    }

    /// A random invertible `2n × 2n` matrix.
    pub fn group_element(&mut self, n: usize) -> Option<GroupElement> {
        retry(|| GroupElement::new(self.matrix(2 * n, 2 * n)).ok())
    }
}

/// Runs `f` until it yields a value, at most [`RETRY_CAP`] times.
pub fn retry<T>(mut f: impl FnMut() -> Option<T>) -> Option<T> {
    (0..RETRY_CAP).find_map(|_| f())
}
