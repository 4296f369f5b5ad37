//! The cyclotomic field `L = Q(zeta)`, `zeta^7 = 1`, on the power basis
//! `1, zeta, ..., zeta^5`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use super::quad::QuadElt;
use crate::scalar::{int, FieldScalar, Scalar};

/// Element of `Q(zeta_7)` with coordinates in `T`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElt<T> {
    coeffs: [T; 6],
}

/// Fold a vector indexed by exponents mod 7 into the power basis using
/// `zeta^6 = -(1 + zeta + ... + zeta^5)`.
fn reduce7<T: Scalar>(full: [T; 7]) -> [T; 6] {
    let [c0, c1, c2, c3, c4, c5, c6] = full;
    [
        c0 - c6.clone(),
        c1 - c6.clone(),
        c2 - c6.clone(),
        c3 - c6.clone(),
        c4 - c6.clone(),
        c5 - c6,
    ]
}

fn zeros7<T: Scalar>() -> [T; 7] {
    std::array::from_fn(|_| T::zero())
}

impl<T: Scalar> CycloElt<T> {
    pub fn new(coeffs: [T; 6]) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T; 6] {
        &self.coeffs
    }

    pub fn from_scalar(c: T) -> Self {
        let mut coeffs: [T; 6] = std::array::from_fn(|_| T::zero());
        coeffs[0] = c;
        Self { coeffs }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_scalar(int(n))
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let mut full = zeros7::<T>();
        full[k.rem_euclid(7) as usize] = T::one();
        Self::new(reduce7(full))
    }

    /// The power-basis vector `zeta^k`, `k < 6`.
    pub fn basis(k: usize) -> Self {
        let mut coeffs: [T; 6] = std::array::from_fn(|_| T::zero());
        coeffs[k] = T::one();
        Self { coeffs }
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// `lambda = zeta + zeta^2 + zeta^4`.
    pub fn lambda() -> Self {
        QuadElt::<T>::lambda().into()
    }

    /// The automorphism `zeta -> zeta^a`, `a` prime to 7.
    pub fn automorphism(&self, a: i64) -> Self {
        let a = a.rem_euclid(7);
        assert!(a != 0, "zeta -> zeta^0 is not an automorphism");
        let mut full = zeros7::<T>();
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = (i as i64 * a) % 7;
            full[j as usize] = full[j as usize].clone() + c.clone();
        }
        Self::new(reduce7(full))
    }

    /// `sigma^k` where `sigma: zeta -> zeta^2` generates `Gal(L/K)`; `sigma^3 = 1`.
    pub fn sigma_pow(&self, k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => self.clone(),
            1 => self.automorphism(2),
            _ => self.automorphism(4),
        }
    }

    pub fn sigma(&self) -> Self {
        self.sigma_pow(1)
    }

    /// Complex conjugation `zeta -> zeta^6`.
    pub fn conj(&self) -> Self {
        self.automorphism(6)
    }

    /// The element as a member of `K`, if it lies there.
    pub fn as_quad(&self) -> Option<QuadElt<T>> {
        let [a, b, b2, z3, b4, z5] = &self.coeffs;
        if b2 == b && b4 == b && z3.is_zero() && z5.is_zero() {
            Some(QuadElt::new(a.clone(), b.clone()))
        } else {
            None
        }
    }

    /// The element as a rational, if it lies in `Q`.
    pub fn as_scalar(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// `tr_{L/K}(x) = x + sigma(x) + sigma^2(x)`.
    pub fn trace_to_k(&self) -> QuadElt<T> {
        let t = self.clone() + self.sigma_pow(1) + self.sigma_pow(2);
        t.as_quad().expect("sigma-invariant element lies in K")
    }

    /// `tr_{L/Q}`.
    pub fn trace_to_q(&self) -> T {
        self.trace_to_k().trace_to_q()
    }

    /// `N_{L/Q}`, the product of the six conjugates.
    pub fn norm_to_q(&self) -> T {
        let p = (1..7).fold(Self::one(), |acc, a| acc * self.automorphism(a));
        p.as_scalar().expect("norm lies in Q")
    }

    /// True when every coordinate satisfies `pred` (used for `O_L = Z[zeta]` membership).
    pub fn all_coeffs(&self, pred: impl Fn(&T) -> bool) -> bool {
        self.coeffs.iter().all(pred)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CycloElt<U> {
        CycloElt::new(std::array::from_fn(|i| f(&self.coeffs[i])))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }
}

impl<T: FieldScalar> CycloElt<T> {
    /// Inverse through the norm: `x^{-1} = prod_{a != 1} tau_a(x) / N(x)`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let others = (2..7).fold(Self::one(), |acc, a| acc * self.automorphism(a));
        let n = (self.clone() * others.clone())
            .as_scalar()
            .expect("norm lies in Q");
        let inv_n = T::one() / n;
        Some(others.scale(&inv_n))
    }
}

impl<T: Scalar + ToPrimitive> CycloElt<T> {
    /// Coordinates as floats, for the complex embeddings.
    pub fn to_f64_coeffs(&self) -> [f64; 6] {
        std::array::from_fn(|i| self.coeffs[i].to_f64().unwrap_or(f64::NAN))
    }
}

impl<T: Scalar> From<QuadElt<T>> for CycloElt<T> {
    fn from(q: QuadElt<T>) -> Self {
        let (a, b) = q.into_parts();
        let z = T::zero();
        Self::new([a, b.clone(), b.clone(), z.clone(), b, z])
    }
}

impl<T: Scalar> Zero for CycloElt<T> {
    fn zero() -> Self {
        Self::from_scalar(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<T: Scalar> One for CycloElt<T> {
    fn one() -> Self {
        Self::from_scalar(T::one())
    }
}

impl<T: Scalar> Add for CycloElt<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a0, a1, a2, a3, a4, a5] = self.coeffs;
        let [b0, b1, b2, b3, b4, b5] = rhs.coeffs;
        Self::new([a0 + b0, a1 + b1, a2 + b2, a3 + b3, a4 + b4, a5 + b5])
    }
}

impl<T: Scalar> Sub for CycloElt<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for CycloElt<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a0, a1, a2, a3, a4, a5] = self.coeffs;
        Self::new([-a0, -a1, -a2, -a3, -a4, -a5])
    }
}

impl<T: Scalar> Mul for CycloElt<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut full = zeros7::<T>();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % 7;
                full[k] = full[k].clone() + a.clone() * b.clone();
            }
        }
        Self::new(reduce7(full))
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for CycloElt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for CycloElt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{:?}", self.coeffs)
    }
}

impl<T: FieldScalar> std::ops::Div for CycloElt<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in L")
    }
}
