//! Fixed-precision 2-adic integers and 3x3 matrices, and the two embeddings
//! of `K` into `Q2` at the places above 2.
//!
//! A [`PadicInt`] is an element of `Z2` known modulo `2^prec`. Arithmetic
//! tracks how much of that precision survives; anything that would need
//! more precision than is available returns [`Error::Precision`] so the
//! caller can retry with more bits.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numberfield::Place;
use crate::{KElt, MatK, Rational};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 64;
/// Highest precision the retry loops will go to.
pub const MAX_PRECISION: u32 = 1024;

fn pow2(n: u32) -> BigInt {
    BigInt::one() << n as usize
}

fn trailing_zeros(n: &BigInt) -> u32 {
    n.trailing_zeros().map_or(0, |t| t as u32)
}

/// Element of `Z2` known modulo `2^prec`; the stored residue lies in `[0, 2^prec)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    value: BigInt,
    prec: u32,
}

impl PadicInt {
    pub fn new(value: BigInt, prec: u32) -> Self {
        Self {
            value: value.mod_floor(&pow2(prec)),
            prec,
        }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::new(BigInt::from(n), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> &BigInt {
        &self.value
    }

    /// Whether the residue is zero, i.e. the valuation is not determined.
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Exact valuation; fails when the residue is zero.
    pub fn valuation(&self) -> Result<u32> {
        if self.value.is_zero() {
            Err(Error::Precision { have: self.prec })
        } else {
            Ok(trailing_zeros(&self.value))
        }
    }

    /// A lower bound on the valuation that is always known.
    pub fn valuation_floor(&self) -> u32 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Equality modulo `2^bits`; fails when either operand is not known that far.
    pub fn congruent(&self, other: &PadicInt, bits: u32) -> Result<bool> {
        let have = self.prec.min(other.prec);
        if bits > have {
            return Err(Error::Precision { have });
        }
        Ok(((&self.value - &other.value).mod_floor(&pow2(bits))).is_zero())
    }

    /// Equality at the common precision of the operands.
    pub fn eq_at_precision(&self, other: &PadicInt) -> bool {
        let bits = self.prec.min(other.prec);
        self.congruent(other, bits).expect("bits within precision")
    }

    /// Inverse of a unit, by Newton iteration `x <- x (2 - a x)`.
    pub fn inverse(&self) -> Result<Self> {
        if self.value.is_even() {
            return Err(Error::NotInvertible);
        }
        let m = pow2(self.prec);
        let mut x = BigInt::one();
        let mut bits = 1;
        while bits < self.prec {
            x = (&x * (BigInt::from(2) - &self.value * &x)).mod_floor(&m);
            bits *= 2;
        }
        Ok(Self::new(x, self.prec))
    }

    /// Exact division by `2^k`; requires `2^k` to divide the element.
    pub fn shr(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k > self.prec {
            return Err(Error::Precision { have: self.prec });
        }
        if self.valuation_floor() < k {
            return Err(Error::NotInvertible);
        }
        Ok(Self::new(&self.value >> k as usize, self.prec - k))
    }

    /// Multiplication by `2^k`.
    pub fn shl(&self, k: u32) -> Self {
        Self::new(&self.value << k as usize, self.prec + k)
    }

    /// Drop to a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        Self::new(self.value.clone(), prec.min(self.prec))
    }

    /// The residue as the representative in `(-2^(prec-1), 2^(prec-1)]`.
    pub fn signed_residue(&self) -> BigInt {
        let half = pow2(self.prec.saturating_sub(1));
        if self.prec > 0 && self.value > half {
            &self.value - pow2(self.prec)
        } else {
            self.value.clone()
        }
    }
}

impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        PadicInt::new(&self.value + &rhs.value, self.prec.min(rhs.prec))
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        PadicInt::new(&self.value - &rhs.value, self.prec.min(rhs.prec))
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    // (a + 2^pa e)(b + 2^pb f) is known modulo 2^min(pa + v(b), pb + v(a)).
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        let prec = (self.prec + rhs.valuation_floor()).min(rhs.prec + self.valuation_floor());
        PadicInt::new(&self.value * &rhs.value, prec)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt::new(-&self.value, self.prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PadicInt {
            type Output = PadicInt;
            fn $m(self, rhs: PadicInt) -> PadicInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(2^{})", self.value, self.prec)
    }
}

/// `2^shift * unit_part`, an element of `Q2` with bounded denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNum {
    shift: i64,
    int: PadicInt,
}

impl PadicNum {
    pub fn new(shift: i64, int: PadicInt) -> Self {
        Self { shift, int }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn int_part(&self) -> &PadicInt {
        &self.int
    }

    /// True valuation: `shift + v(int_part)`.
    pub fn valuation(&self) -> Result<i64> {
        Ok(self.shift + self.int.valuation()? as i64)
    }

    /// The element as a 2-adic integer, if it is integral.
    pub fn to_padic_int(&self) -> Result<PadicInt> {
        if self.shift >= 0 {
            Ok(self.int.shl(self.shift as u32))
        } else {
            let k = (-self.shift) as u32;
            match self.int.shr(k) {
                Err(Error::NotInvertible) => Err(Error::NotInvertible),
                r => r,
            }
        }
    }

    /// Rewrite with the given (smaller or equal) shift.
    fn with_shift(&self, shift: i64) -> PadicInt {
        debug_assert!(shift <= self.shift);
        self.int.shl((self.shift - shift) as u32)
    }
}

impl Add for &PadicNum {
    type Output = PadicNum;
    fn add(self, rhs: &PadicNum) -> PadicNum {
        let s = self.shift.min(rhs.shift);
        PadicNum::new(s, &self.with_shift(s) + &rhs.with_shift(s))
    }
}

impl Mul for &PadicNum {
    type Output = PadicNum;
    fn mul(self, rhs: &PadicNum) -> PadicNum {
        PadicNum::new(self.shift + rhs.shift, &self.int * &rhs.int)
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{} * ({:?})", self.shift, self.int)
    }
}

/// The root of `t^2 + t + 2` in `Z2` with valuation 1, modulo `2^precision`.
///
/// This is the image of `lambda` at the place [`Place::Lambda`]; the other
/// root `-1 - r` is a unit and is the image at [`Place::LambdaBar`].
pub fn hensel_root_lambda(precision: u32) -> PadicInt {
    assert!(precision >= 2, "need at least 2 bits");
    let f = |r: &BigInt| r * r + r + BigInt::from(2);
    // f'(r) = 2r + 1 is odd, so each bit of the root is forced.
    let mut r = BigInt::zero();
    for k in 1..precision {
        if !(f(&r).mod_floor(&pow2(k + 1))).is_zero() {
            r += pow2(k);
        }
    }
    PadicInt::new(r, precision)
}

/// Image of `lambda` in `Z2` at one of the two places above 2.
pub fn lambda_image(place: Place, precision: u32) -> Result<PadicInt> {
    let r = hensel_root_lambda(precision);
    match place {
        Place::Lambda => Ok(r),
        Place::LambdaBar => Ok(&PadicInt::from_i64(-1, precision) - &r),
        _ => Err(Error::InfinitePlace),
    }
}

/// Embedding `K -> Q2` at `place`.
pub fn embed_k_2adic(x: &KElt, place: Place, precision: u32) -> Result<PadicNum> {
    let r = lambda_image(place, precision)?;
    let d = x.a().denom().lcm(x.b().denom());
    let a = (x.a() * Rational::from_integer(d.clone())).to_integer();
    let b = (x.b() * Rational::from_integer(d.clone())).to_integer();
    let e = trailing_zeros(&d);
    let odd = PadicInt::new(&d >> e as usize, precision).inverse()?;
    let num = &PadicInt::new(a, precision) + &(&PadicInt::new(b, precision) * &r);
    let mut out = PadicNum::new(-(e as i64), &num * &odd);
    // pull powers of two out of the integer part when they are known
    if let Ok(v) = out.int.valuation() {
        if v > 0 {
            out = PadicNum::new(out.shift + v as i64, out.int.shr(v)?);
        }
    }
    Ok(out)
}

/// Embedding of an integral element of `K`.
pub fn embed_k_integral(x: &KElt, place: Place, precision: u32) -> Result<PadicInt> {
    let n = embed_k_2adic(x, place, precision)?;
    if n.int.is_indistinguishable_from_zero() {
        return Ok(PadicInt::zero(precision));
    }
    n.to_padic_int()
}

/// Recover `(a, b)` modulo `2^N` for `x = a + b lambda` in `O_K` from its two
/// 2-adic images.
pub fn recover_from_places(at_lambda: &PadicInt, at_lambda_bar: &PadicInt) -> Result<(BigInt, BigInt)> {
    let prec = at_lambda.precision().min(at_lambda_bar.precision());
    let r = hensel_root_lambda(prec);
    // e1 - e2 = b (2r + 1)
    let two_r_plus_one = &(&r + &r) + &PadicInt::one(prec);
    let b = &(at_lambda - at_lambda_bar) * &two_r_plus_one.inverse()?;
    let a = at_lambda - &(&b * &r);
    Ok((a.signed_residue(), b.signed_residue()))
}

/// 3x3 matrix `2^scale * (entries)` over `Z2`.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicMat {
    scale: i64,
    entries: [[PadicInt; 3]; 3],
}

impl PadicMat {
    pub fn new(scale: i64, entries: [[PadicInt; 3]; 3]) -> Self {
        Self { scale, entries }
    }

    pub fn identity(prec: u32) -> Self {
        Self::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]], prec)
    }

    pub fn from_i64(m: &[[i64; 3]; 3], prec: u32) -> Self {
        Self::new(0, std::array::from_fn(|i| std::array::from_fn(|j| PadicInt::from_i64(m[i][j], prec))))
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn entries(&self) -> &[[PadicInt; 3]; 3] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &PadicInt {
        &self.entries[i][j]
    }

    /// Smallest precision over all entries.
    pub fn precision(&self) -> u32 {
        self.entries.iter().flatten().map(PadicInt::precision).min().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.scale, std::array::from_fn(|i| std::array::from_fn(|j| self.entries[j][i].clone())))
    }

    /// Entrywise embedding of a matrix over `K` at `place`.
    pub fn embed(m: &MatK, place: Place, precision: u32) -> Result<Self> {
        let nums: Vec<PadicNum> = m
            .iter()
            .map(|x| embed_k_2adic(x, place, precision))
            .collect::<Result<_>>()?;
        let scale = nums.iter().map(PadicNum::shift).min().unwrap_or(0);
        let ints: Vec<PadicInt> = nums.iter().map(|n| n.with_shift(scale)).collect();
        Ok(Self::new(scale, std::array::from_fn(|i| std::array::from_fn(|j| ints[3 * i + j].clone()))))
    }

    /// Re-express with scale exactly `scale` (which must not exceed the current one).
    pub fn rescale(&self, scale: i64) -> Result<Self> {
        if scale <= self.scale {
            let k = (self.scale - scale) as u32;
            Ok(Self::new(scale, self.entries.clone().map(|row| row.map(|e| e.shl(k)))))
        } else {
            let k = (scale - self.scale) as u32;
            let rows = self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.shr(k)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(Self::new(scale, std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j].clone()))))
        }
    }

    pub fn mul(&self, rhs: &PadicMat) -> PadicMat {
        let e = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3)
                    .map(|k| &self.entries[i][k] * &rhs.entries[k][j])
                    .reduce(|a, b| &a + &b)
                    .expect("three terms")
            })
        });
        PadicMat::new(self.scale + rhs.scale, e)
    }

    pub fn det(&self) -> PadicNum {
        let m = &self.entries;
        let minor = |r: [usize; 2], c: [usize; 2]| &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]]);
        let d = &(&(&m[0][0] * &minor([1, 2], [1, 2])) - &(&m[0][1] * &minor([1, 2], [0, 2])))
            + &(&m[0][2] * &minor([1, 2], [0, 1]));
        PadicNum::new(3 * self.scale, d)
    }

    /// Inverse of a matrix whose integer part has unit determinant.
    pub fn inverse(&self) -> Result<PadicMat> {
        let m = &self.entries;
        let d = self.det().int.inverse()?;
        let others = |k: usize| -> [usize; 2] {
            match k {
                0 => [1, 2],
                1 => [0, 2],
                _ => [0, 1],
            }
        };
        let e = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let (r, c) = (others(j), others(i));
                let minor = &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]]);
                let cof = if (i + j) % 2 == 0 { minor } else { -&minor };
                &cof * &d
            })
        });
        Ok(PadicMat::new(-self.scale, e))
    }

    /// Entrywise congruence after bringing both to a common scale, at the
    /// common precision.
    pub fn eq_at_precision(&self, other: &PadicMat) -> Result<bool> {
        let s = self.scale.min(other.scale);
        let a = self.rescale(s)?;
        let b = other.rescale(s)?;
        Ok(a
            .entries
            .iter()
            .flatten()
            .zip(b.entries.iter().flatten())
            .all(|(x, y)| x.eq_at_precision(y)))
    }

    /// Signed residues of the entries of the integer part.
    pub fn residues(&self) -> [[BigInt; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].signed_residue()))
    }
}

impl fmt::Debug for PadicMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{} * {:?}", self.scale, self.residues())
    }
}
