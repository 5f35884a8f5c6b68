//! Coefficient fields.
//!
//! Every structure in this crate is generic over a [`Scalar`]. The checks that
//! matter (D² = 0, Jacobi, the Weil tables) are only meaningful with exact
//! arithmetic, so the crate-root aliases fix the scalar to [`BigRational`].
//! `f64` is supported for evaluation-style experiments; zero tests on it are
//! exact comparisons, not tolerances.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive};

/// A field usable as polynomial coefficients.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + fmt::Display + Signed + Send + Sync + 'static
{
    /// Builds the scalar `numer / denom`. `denom` is nonzero.
    fn from_ratio(numer: BigInt, denom: BigInt) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(BigInt::from(n), BigInt::from(1))
    }

    /// `1/2`, used by the curvature halves in the Weil tables.
    fn half() -> Self {
        Self::from_ratio(BigInt::from(1), BigInt::from(2))
    }
}

impl Scalar for BigRational {
    fn from_ratio(numer: BigInt, denom: BigInt) -> Self {
        BigRational::new(numer, denom)
    }
}

impl Scalar for Rational64 {
    fn from_ratio(numer: BigInt, denom: BigInt) -> Self {
        let n = numer.to_i64().expect("numerator overflows i64");
        let d = denom.to_i64().expect("denominator overflows i64");
        Rational64::new(n, d)
    }
}

impl Scalar for f64 {
    fn from_ratio(numer: BigInt, denom: BigInt) -> Self {
        numer.to_f64().unwrap_or(f64::NAN) / denom.to_f64().unwrap_or(f64::NAN)
    }
}

/// Sign `(-1)^k` as a scalar.
pub fn sign<S: Scalar>(odd: bool) -> S {
    if odd {
        -S::one()
    } else {
        S::one()
    }
}
