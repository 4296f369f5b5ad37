//! Scalar traits for the generic arithmetic layers.
//!
//! Every ring in this crate (the cyclotomic field, the quadratic subfield,
//! the division algebra and the 3x3 matrix rings over them) is generic over
//! a coefficient type. Exact work uses [`BigRational`]; enumeration over the
//! integer ring uses `i64`; `Ratio<i64>` is available where the sizes are
//! known to be small.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Zero};

/// Coefficient ring for number-field coordinates.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Num + Neg<Output = T> + FromPrimitive + Send + Sync
{
}

/// Coefficient rings where every nonzero element has an inverse.
///
/// Integer types implement [`Num`] with truncating division, so they are
/// deliberately left out.
pub trait FieldScalar: Scalar {}

impl FieldScalar for Ratio<i64> {}
impl FieldScalar for Ratio<i128> {}
impl FieldScalar for BigRational {}

/// Anything that can sit in a [`crate::matrix::Mat3`].
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Small integer literal in any scalar type.
#[inline]
pub fn int<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("small integer literal")
}

/// Exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// 2-adic (or any `p`-adic) valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero rational.
pub fn rat_valuation(q: &BigRational, p: u64) -> i64 {
    int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64
}
