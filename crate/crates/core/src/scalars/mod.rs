//! Scalar rings the octonion algorithms are generic over.
//!
//! Every product routine in this crate is written against [`ScalarRing`], so
//! the same code runs over exact rationals ([`Rational`]), doubles, the
//! instrumented [`Counted`] wrapper that tallies arithmetic events, and the
//! symbolic [`Polynomial16`] used for identity checking.

mod counting;
mod polynomial;
mod rational;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub use counting::{with_counting, Counted, OpCounts};
pub use polynomial::{poly_equal, Monomial, Polynomial16};
pub use rational::{ParseScalarError, Rational};

/// A commutative ring with an explicit power-of-two scaling.
///
/// `scale_pow2(k)` must agree with multiplication by `2^k`; it exists as a
/// separate operation so instrumented realizations can account for it as a
/// shift instead of a multiplication.
pub trait ScalarRing:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn scale_pow2(self, k: i32) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl ScalarRing for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn scale_pow2(self, k: i32) -> Self {
        self * 2f64.powi(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_scale_pow2_is_exact() {
        assert_eq!(3.0f64.scale_pow2(3), 24.0);
        assert_eq!(3.0f64.scale_pow2(-2), 0.75);
        assert_eq!((-5.0f64).scale_pow2(0), -5.0);
    }
}
