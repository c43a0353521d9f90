//! Exact computational kernel for Jordan pairs over matrix algebras, the
//! projective line `P(M_n(K))` and the symmetric spaces attached to it.
//!
//! Every routine is ring-generic over the scalar tower in [`scalar`], so
//! derivatives come for free by evaluating over dual numbers.

pub mod algebra;
pub mod calculus;
pub mod error;
pub mod jordan;
pub mod json;
pub mod lie3;
pub mod matrix;
pub mod projline;
pub mod sample;
pub mod scalar;
pub mod symspace;
pub mod verify;

pub use algebra::{AlgebraElement, FormSymmetry, InvolutionSpec, LinearOperator};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{RingDescriptor, Scalar};
