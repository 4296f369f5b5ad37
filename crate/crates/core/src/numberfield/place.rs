//! Places of `K`, normalized valuations and the complex embeddings.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{CycloElt, QuadElt};
use crate::error::{Error, Result};
use crate::scalar::{rat_valuation, Scalar};
use crate::{KElt, Rational};

/// A place of `K = Q(sqrt(-7))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// The prime `lambda` above 2.
    Lambda,
    /// The prime `bar(lambda)` above 2.
    LambdaBar,
    /// The unique place above an odd prime `l != 7` that is inert in `K`.
    Rational(u64),
    /// The ramified prime `sqrt(-7)`.
    Seven,
    /// `epsilon: lambda -> (-1 + sqrt(-7))/2`.
    InfiniteEpsilon,
    /// `theta: zeta -> exp(2 pi i / 7)` (on `L`).
    InfiniteTheta,
}

impl Place {
    pub fn is_finite(self) -> bool {
        !matches!(self, Place::InfiniteEpsilon | Place::InfiniteTheta)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Lambda => write!(f, "lambda"),
            Place::LambdaBar => write!(f, "lambda_bar"),
            Place::Rational(l) => write!(f, "{l}"),
            Place::Seven => write!(f, "sqrt(-7)"),
            Place::InfiniteEpsilon => write!(f, "epsilon"),
            Place::InfiniteTheta => write!(f, "theta"),
        }
    }
}

/// Additive valuation; `Infinity` is the value at zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Whether the odd prime `l != 7` splits in `K`, i.e. `-7` is a square mod `l`.
pub fn splits_in_k(l: u64) -> bool {
    // By reciprocity, (-7 / l) = (l / 7).
    matches!(l % 7, 1 | 2 | 4)
}

/// `v_lambda` of a nonzero element of `Z[lambda]` given by integer coordinates.
fn lambda_valuation_integral(mut a: BigInt, mut b: BigInt) -> i64 {
    // a + b lambda is divisible by lambda iff a is even; the quotient is
    // (a + b lambda) bar(lambda) / 2 = ((2b - a) - a lambda) / 2.
    let mut v = 0;
    while a.is_even() {
        let na = (BigInt::from(2) * &b - &a) / 2;
        let nb = -&a / 2;
        a = na;
        b = nb;
        v += 1;
    }
    v
}

fn lambda_valuation(x: &KElt) -> i64 {
    let d = x.a().denom().lcm(x.b().denom());
    let a = (x.a() * Rational::from_integer(d.clone())).to_integer();
    let b = (x.b() * Rational::from_integer(d.clone())).to_integer();
    lambda_valuation_integral(a, b) - crate::scalar::int_valuation(&d, 2) as i64
}

/// Normalized additive valuation of `x` at a finite place.
pub fn valuation(x: &KElt, place: Place) -> Result<Valuation> {
    if !place.is_finite() {
        return Err(Error::InfinitePlace);
    }
    if let Place::Rational(l) = place {
        if l == 2 || l == 7 || !is_prime(l) {
            return Err(Error::NotOddPrime(l));
        }
        if splits_in_k(l) {
            return Err(Error::SplitPrime(l));
        }
    }
    if x.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let v = match place {
        Place::Lambda => lambda_valuation(x),
        Place::LambdaBar => lambda_valuation(&x.conj()),
        // ramified: residue degree 1, so v = v_7(N x)
        Place::Seven => rat_valuation(&x.norm(), 7),
        // inert: residue degree 2
        Place::Rational(l) => rat_valuation(&x.norm(), l) / 2,
        _ => unreachable!(),
    };
    Ok(Valuation::Finite(v))
}

/// True when `x` is a unit at every place above the odd prime `l` (split or not).
pub fn is_unit_above(x: &KElt, l: u64) -> bool {
    let l_big = BigInt::from(l);
    let integral = [x.a(), x.b()]
        .iter()
        .all(|c| !(c.denom() % &l_big).is_zero());
    integral && !x.is_zero() && rat_valuation(&x.norm(), l) == 0
}

fn theta_zeta_pow(k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 7.0)
}

/// `epsilon(lambda) = (-1 + i sqrt 7)/2`.
pub fn epsilon_lambda() -> Complex64 {
    Complex64::new(-0.5, 7f64.sqrt() / 2.0)
}

/// Image of an element of `K` under `epsilon`.
pub fn embed_k<T: Scalar + ToPrimitive>(x: &QuadElt<T>) -> Complex64 {
    let a = x.a().to_f64().unwrap_or(f64::NAN);
    let b = x.b().to_f64().unwrap_or(f64::NAN);
    Complex64::new(a, 0.0) + epsilon_lambda() * b
}

/// Complex image of `x` under `theta`, or under `epsilon` when `x` lies in `K`.
pub fn embed_complex<T: Scalar + ToPrimitive>(x: &CycloElt<T>, place: Place) -> Result<Complex64> {
    match place {
        Place::InfiniteTheta => Ok(x
            .to_f64_coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| theta_zeta_pow(k) * *c)
            .sum()),
        Place::InfiniteEpsilon => x.as_quad().map(|q| embed_k(&q)).ok_or(Error::NotInK),
        _ => Err(Error::InfinitePlace),
    }
}
