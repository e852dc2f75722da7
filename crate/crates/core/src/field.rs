//! Minimal exact-field abstraction for the elimination routines.
//!
//! Implemented by `BigRational` (all rational cohomology) and by
//! [`crate::cyclo::Cyclo`] (cyclotomic twists). No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Field:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Zero
    + One
    + std::ops::Sub<Output = Self>
    + std::ops::Neg<Output = Self>
{
    /// Multiplicative inverse; panics on zero (callers pivot on nonzeros only).
    fn inv(&self) -> Self;

    fn from_int(k: i64) -> Self {
        let mut acc = Self::zero();
        for _ in 0..k.unsigned_abs() {
            acc = acc + Self::one();
        }
        if k < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }
    fn from_int(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
}

/// Convenience: |numerator| + |denominator| size proxy used by pivot heuristics.
pub fn rational_size(r: &BigRational) -> usize {
    (r.numer().abs().bits() + r.denom().bits()) as usize
}
