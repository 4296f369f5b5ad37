//! Dense 3x3 matrices over any ring, plus a few rational helpers for
//! larger exact matrices.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::numberfield::{CycloElt, QuadElt};
use crate::scalar::{Ring, Scalar};
use crate::Rational;

/// Rings with a conjugation (complex conjugation on `K`, `L` and `C`).
pub trait Conj {
    fn conj(&self) -> Self;
}

impl<T: Scalar> Conj for QuadElt<T> {
    fn conj(&self) -> Self {
        QuadElt::conj(self)
    }
}

impl<T: Scalar> Conj for CycloElt<T> {
    fn conj(&self) -> Self {
        CycloElt::conj(self)
    }
}

impl Conj for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

/// A 3x3 matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat3<E> {
    rows: [[E; 3]; 3],
}

/// Monic cubic `t^3 + c2 t^2 + c1 t + c0`, stored as `[c0, c1, c2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cubic<E>(pub [E; 3]);

impl<E> Mat3<E> {
    pub fn new(rows: [[E; 3]; 3]) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[[E; 3]; 3] {
        &self.rows
    }

    pub fn into_rows(self) -> [[E; 3]; 3] {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[E; 3] {
        &self.rows[i]
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> E) -> Self {
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn map<F>(&self, mut f: impl FnMut(&E) -> F) -> Mat3<F> {
        Mat3::from_fn(|i, j| f(&self.rows[i][j]))
    }

    pub fn iter(&self) -> impl Iterator<Item = &E> {
        self.rows.iter().flatten()
    }
}

impl<E: Clone> Mat3<E> {
    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i].clone())
    }
}

impl<E: Ring> Mat3<E> {
    pub fn zero() -> Self {
        Self::from_fn(|_, _| E::zero())
    }

    pub fn identity() -> Self {
        Self::scalar(E::one())
    }

    pub fn scalar(e: E) -> Self {
        Self::from_fn(|i, j| if i == j { e.clone() } else { E::zero() })
    }

    pub fn diag(d: [E; 3]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { E::zero() })
    }

    /// `e * self`.
    pub fn scale(&self, e: &E) -> Self {
        self.map(|x| e.clone() * x.clone())
    }

    pub fn trace(&self) -> E {
        self.rows[0][0].clone() + self.rows[1][1].clone() + self.rows[2][2].clone()
    }

    fn minor(&self, r: [usize; 2], c: [usize; 2]) -> E {
        let m = &self.rows;
        m[r[0]][c[0]].clone() * m[r[1]][c[1]].clone() - m[r[0]][c[1]].clone() * m[r[1]][c[0]].clone()
    }

    pub fn det(&self) -> E {
        let m = &self.rows;
        m[0][0].clone() * self.minor([1, 2], [1, 2]) - m[0][1].clone() * self.minor([1, 2], [0, 2])
            + m[0][2].clone() * self.minor([1, 2], [0, 1])
    }

    /// Classical adjoint: `A adj(A) = det(A) I`.
    pub fn adjugate(&self) -> Self {
        let others = |k: usize| -> [usize; 2] {
            match k {
                0 => [1, 2],
                1 => [0, 2],
                _ => [0, 1],
            }
        };
        Self::from_fn(|i, j| {
            let c = self.minor(others(j), others(i));
            if (i + j) % 2 == 0 {
                c
            } else {
                -c
            }
        })
    }

    /// Characteristic polynomial `det(t I - A)`.
    pub fn char_poly(&self) -> Cubic<E> {
        let c2 = self.minor([0, 1], [0, 1]) + self.minor([0, 2], [0, 2]) + self.minor([1, 2], [1, 2]);
        Cubic([-self.det(), c2, -self.trace()])
    }

    /// The scalar `e` if `self = e I`.
    pub fn as_scalar(&self) -> Option<E> {
        let e = self.rows[0][0].clone();
        (*self == Self::scalar(e.clone())).then_some(e)
    }

    pub fn is_zero(&self) -> bool {
        self.iter().all(|e| e.is_zero())
    }

    /// `self^n` for `n >= 0`.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc * self.clone())
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &[E; 3], m: &Self) -> [E; 3] {
        std::array::from_fn(|j| {
            (0..3).fold(E::zero(), |acc, k| acc + v[k].clone() * m.rows[k][j].clone())
        })
    }
}

impl<E: Ring + Conj> Mat3<E> {
    /// Conjugate transpose.
    pub fn star(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i].conj())
    }

    /// Entrywise conjugation.
    pub fn conj(&self) -> Self {
        self.map(Conj::conj)
    }
}

impl<E: Ring + Div<Output = E>> Mat3<E> {
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        Some(self.adjugate().map(|x| x.clone() / d.clone()))
    }
}

impl<E: Ring> Add for Mat3<E> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j].clone() + rhs.rows[i][j].clone())
    }
}

impl<E: Ring> Sub for Mat3<E> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j].clone() - rhs.rows[i][j].clone())
    }
}

impl<E: Ring> Neg for Mat3<E> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x.clone())
    }
}

impl<E: Ring> Mul for Mat3<E> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<E: Ring> Mul for &Mat3<E> {
    type Output = Mat3<E>;
    fn mul(self, rhs: &Mat3<E>) -> Mat3<E> {
        Mat3::from_fn(|i, j| {
            (0..3).fold(E::zero(), |acc, k| acc + self.rows[i][k].clone() * rhs.rows[k][j].clone())
        })
    }
}

impl<E: Ring> Zero for Mat3<E> {
    fn zero() -> Self {
        Mat3::zero()
    }
    fn is_zero(&self) -> bool {
        Mat3::is_zero(self)
    }
}

impl<E: Ring> One for Mat3<E> {
    fn one() -> Self {
        Mat3::identity()
    }
}

impl<E: fmt::Debug> fmt::Debug for Mat3<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

impl<E: fmt::Display> fmt::Display for Mat3<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}, {}, {}", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn det_rational(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Exact `L D L^T` factorization of a symmetric rational matrix.
///
/// Returns `(l, d)` with `l` unit lower triangular, or `None` if a leading
/// principal minor vanishes.
pub fn ldl_rational(g: &[Vec<Rational>]) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let n = g.len();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = g[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if dj.is_zero() {
            return None;
        }
        d[j] = dj;
        l[j][j] = Rational::one();
        for i in j + 1..n {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = s / &d[j];
        }
    }
    Some((l, d))
}

/// Exact positive-definiteness test (all `LDL^T` pivots positive).
pub fn is_positive_definite(g: &[Vec<Rational>]) -> bool {
    use num_traits::Signed;
    ldl_rational(g).is_some_and(|(_, d)| d.iter().all(|x| x.is_positive()))
}
