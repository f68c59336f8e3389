//! Scalar types that addresses can be evaluated into.
//!
//! Digit sequences are symbolic; only evaluation needs a number type. Exact
//! work uses [`Exact`](crate::Exact) (big rationals); quick approximations use
//! `f64` or `f32`.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

/// A number type addresses can be evaluated into.
///
/// Anything closed under `+ - * /` that can be built from a `u32` qualifies.
pub trait Scalar: Num + Clone + FromPrimitive + Debug {
    /// Lifts a digit or base into the scalar type.
    fn from_digit(d: u32) -> Self {
        Self::from_u32(d).expect("every scalar type represents small integers")
    }

    /// `base^exp` for a non-negative exponent.
    fn pow_u(base: &Self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * base.clone();
        }
        acc
    }
}

impl<T: Num + Clone + FromPrimitive + Debug> Scalar for T {}
