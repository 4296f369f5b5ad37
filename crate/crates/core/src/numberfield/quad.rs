//! The imaginary quadratic field `K = Q(lambda)`, `lambda^2 + lambda + 2 = 0`,
//! so that `lambda = (-1 + sqrt(-7)) / 2` and `O_K = Z[lambda]`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{int, FieldScalar, Scalar};

/// `a + b*lambda`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElt<T> {
    a: T,
    b: T,
}

impl<T: Scalar> QuadElt<T> {
    pub fn new(a: T, b: T) -> Self {
        Self { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Self::new(int(a), int(b))
    }

    pub fn from_scalar(a: T) -> Self {
        Self::new(a, T::zero())
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn into_parts(self) -> (T, T) {
        (self.a, self.b)
    }

    pub fn lambda() -> Self {
        Self::from_ints(0, 1)
    }

    /// `bar(lambda) = -1 - lambda`.
    pub fn lambda_bar() -> Self {
        Self::from_ints(-1, -1)
    }

    /// `sqrt(-7) = lambda - bar(lambda) = 1 + 2 lambda`.
    pub fn sqrt_m7() -> Self {
        Self::from_ints(1, 2)
    }

    /// Complex conjugation: `a + b*bar(lambda) = (a - b) - b*lambda`.
    pub fn conj(&self) -> Self {
        Self::new(self.a.clone() - self.b.clone(), -self.b.clone())
    }

    /// `N_{K/Q}(a + b lambda) = a^2 - ab + 2b^2`.
    pub fn norm(&self) -> T {
        let (a, b) = (&self.a, &self.b);
        a.clone() * a.clone() - a.clone() * b.clone() + int::<T>(2) * b.clone() * b.clone()
    }

    /// `tr_{K/Q}(a + b lambda) = 2a - b`.
    pub fn trace_to_q(&self) -> T {
        int::<T>(2) * self.a.clone() - self.b.clone()
    }

    /// The rational value, when `b = 0`.
    pub fn as_scalar(&self) -> Option<T> {
        self.b.is_zero().then(|| self.a.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.a.clone() * c.clone(), self.b.clone() * c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> QuadElt<U> {
        QuadElt::new(f(&self.a), f(&self.b))
    }
}

impl<T: FieldScalar> QuadElt<T> {
    /// `mu = lambda / bar(lambda) = -1 - lambda/2`.
    pub fn mu() -> Self {
        Self::new(int(-1), T::one() / int::<T>(-2))
    }

    /// `bar(mu) = 1/mu = -1/2 + lambda/2`.
    pub fn mu_bar() -> Self {
        Self::mu().conj()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(self.conj().scale(&(T::one() / n)))
    }
}

impl<T: Scalar> Zero for QuadElt<T> {
    fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<T: Scalar> One for QuadElt<T> {
    fn one() -> Self {
        Self::new(T::one(), T::zero())
    }
}

impl<T: Scalar> Add for QuadElt<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl<T: Scalar> Sub for QuadElt<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl<T: Scalar> Neg for QuadElt<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl<T: Scalar> Mul for QuadElt<T> {
    type Output = Self;
    // (a + b l)(c + d l) = ac - 2bd + (ad + bc - bd) l
    fn mul(self, rhs: Self) -> Self {
        let (a, b, c, d) = (self.a, self.b, rhs.a, rhs.b);
        let bd = b.clone() * d.clone();
        Self::new(
            a.clone() * c.clone() - int::<T>(2) * bd.clone(),
            a * d + b * c - bd,
        )
    }
}

impl<T: FieldScalar> Div for QuadElt<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in K")
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for QuadElt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})l", self.b),
            (false, false) => write!(f, "{} + ({})l", self.a, self.b),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for QuadElt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({:?}, {:?})", self.a, self.b)
    }
}
