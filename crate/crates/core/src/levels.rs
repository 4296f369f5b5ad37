//! Level structure at 7: reduction modulo `sqrt(-7)`, the map `varpi` to
//! `GL2(F7)`, a Sylow 2-subgroup `P`, the subgroup `C7 = varpi^-1(P)`, the
//! character `theta` and the component count.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::hermitian::{build_h, dagger};
use crate::{sample, KElt, MatK, Rational};

pub const P: u8 = 7;

/// Element of `F7`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F7(u8);

impl F7 {
    pub fn new(n: i64) -> Self {
        Self(n.rem_euclid(P as i64) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(F7(1), |acc, _| acc * self)
    }

    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(5))
    }

    /// The units of `F7`.
    pub fn units() -> impl Iterator<Item = F7> {
        (1..P).map(F7)
    }
}

impl Add for F7 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        F7((self.0 + o.0) % P)
    }
}

impl Sub for F7 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        F7((self.0 + P - o.0) % P)
    }
}

impl Mul for F7 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        F7(self.0 * o.0 % P)
    }
}

impl Neg for F7 {
    type Output = Self;
    fn neg(self) -> Self {
        F7((P - self.0) % P)
    }
}

impl fmt::Debug for F7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for F7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `N x N` matrix over `F7`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMat<const N: usize> {
    e: [[F7; N]; N],
}

pub type Gl2 = FqMat<2>;

impl<const N: usize> FqMat<N> {
    pub fn new(e: [[F7; N]; N]) -> Self {
        Self { e }
    }

    pub fn from_i64(m: [[i64; N]; N]) -> Self {
        Self::new(m.map(|r| r.map(F7::new)))
    }

    pub fn entries(&self) -> &[[F7; N]; N] {
        &self.e
    }

    pub fn get(&self, i: usize, j: usize) -> F7 {
        self.e[i][j]
    }

    pub fn identity() -> Self {
        Self::scalar(F7(1))
    }

    pub fn scalar(c: F7) -> Self {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { c } else { F7(0) })
        }))
    }

    pub fn scale(&self, c: F7) -> Self {
        Self::new(self.e.map(|r| r.map(|x| x * c)))
    }

    pub fn is_scalar(&self) -> bool {
        *self == Self::scalar(self.e[0][0])
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &[F7; N], m: &Self) -> [F7; N] {
        std::array::from_fn(|j| (0..N).fold(F7(0), |acc, k| acc + v[k] * m.e[k][j]))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<[F7; N]> = self.e.to_vec();
        let mut rank = 0;
        for col in 0..N {
            let Some(p) = (rank..N).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = rows[rank][col].inverse().expect("nonzero pivot");
            for r in 0..N {
                if r != rank && !rows[r][col].is_zero() {
                    let f = rows[r][col] * inv;
                    for c in 0..N {
                        rows[r][c] = rows[r][c] - f * rows[rank][c];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Order in `GL_N(F7)`.
    pub fn order(&self) -> usize {
        let mut x = *self;
        let mut n = 1;
        while x != Self::identity() {
            x = x * *self;
            n += 1;
        }
        n
    }
}

impl FqMat<2> {
    pub fn det(&self) -> F7 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det().inverse()?;
        let [[a, b], [c, e]] = self.e;
        Some(Self::new([[e * d, -b * d], [-c * d, a * d]]))
    }

    /// All 2016 elements of `GL2(F7)`.
    pub fn enumerate_gl2() -> Vec<Self> {
        let mut out = Vec::with_capacity(2016);
        for n in 0..(P as u32).pow(4) {
            let d = |k: u32| F7((n / (P as u32).pow(k) % P as u32) as u8);
            let m = Self::new([[d(0), d(1)], [d(2), d(3)]]);
            if !m.det().is_zero() {
                out.push(m);
            }
        }
        out
    }
}

impl FqMat<3> {
    pub fn det(&self) -> F7 {
        let m = &self.e;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

impl<const N: usize> Mul for FqMat<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(std::array::from_fn(|i| Self::vec_mul(&self.e[i], &o)))
    }
}

impl<const N: usize> fmt::Debug for FqMat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.e)
    }
}

fn reduce_rational(q: &Rational) -> Result<F7> {
    let seven = BigInt::from(7);
    if q.denom().is_multiple_of(&seven) {
        return Err(Error::NotIntegralAtSeven);
    }
    let m = |x: &BigInt| x.mod_floor(&seven).to_i64().expect("small");
    let den = F7::new(m(q.denom())).inverse().expect("7 does not divide the denominator");
    Ok(F7::new(m(q.numer())) * den)
}

/// Reduction `O_K -> O_K / sqrt(-7) = F7`, `lambda -> 3`.
pub fn reduce_mod_sqrt7(x: &KElt) -> Result<F7> {
    Ok(reduce_rational(x.a())? + F7(3) * reduce_rational(x.b())?)
}

pub fn reduce_mat_mod_sqrt7(m: &MatK) -> Result<FqMat<3>> {
    let mut e = [[F7(0); 3]; 3];
    for (i, row) in m.rows().iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            e[i][j] = reduce_mod_sqrt7(x)?;
        }
    }
    Ok(FqMat::new(e))
}

/// Ordered basis of the null space `{x : x (H mod sqrt(-7)) = 0}`, from
/// Gaussian elimination with smallest-index pivots; one vector per free
/// column, with a 1 in that column. Also returns the free columns.
pub fn null_basis() -> ([[F7; 3]; 2], [usize; 2]) {
    let hbar = reduce_mat_mod_sqrt7(&build_h()).expect("H is integral");
    // left null space of hbar = null space of its transpose
    let mut rows: Vec<[F7; 3]> = (0..3).map(|j| std::array::from_fn(|i| hbar.get(i, j))).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..3).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inverse().expect("nonzero pivot");
        rows[r] = rows[r].map(|x| x * inv);
        for k in 0..3 {
            if k != r && !rows[k][col].is_zero() {
                let f = rows[k][col];
                for c in 0..3 {
                    rows[k][c] = rows[k][c] - f * rows[r][c];
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    let free: Vec<usize> = (0..3).filter(|c| !pivots.iter().any(|(_, pc)| pc == c)).collect();
    assert_eq!(free.len(), 2, "H mod sqrt(-7) has rank 1");
    let basis = std::array::from_fn(|n| {
        let mut v = [F7(0); 3];
        v[free[n]] = F7(1);
        for &(row, pc) in &pivots {
            v[pc] = -rows[row][free[n]];
        }
        v
    });
    (basis, [free[0], free[1]])
}

fn in_null_space(v: &[F7; 3], hbar: &FqMat<3>) -> bool {
    FqMat::vec_mul(v, hbar).iter().all(|x| x.is_zero())
}

/// The action of `gamma mod sqrt(-7)` on the null space of `H mod sqrt(-7)`,
/// written on [`null_basis`]: row `i` holds the coordinates of `n_i gamma`.
pub fn varpi(gamma: &MatK) -> Result<Gl2> {
    let g = reduce_mat_mod_sqrt7(gamma)?;
    let hbar = reduce_mat_mod_sqrt7(&build_h()).expect("H is integral");
    let (basis, free) = null_basis();
    let mut e = [[F7(0); 2]; 2];
    for (i, n) in basis.iter().enumerate() {
        let w = FqMat::vec_mul(n, &g);
        if !in_null_space(&w, &hbar) {
            return Err(Error::NullSpaceNotPreserved);
        }
        e[i] = [w[free[0]], w[free[1]]];
    }
    Ok(Gl2::new(e))
}

/// A Sylow 2-subgroup of `{g in GL2(F7) : det g = +-1}`.
#[derive(Clone, Debug)]
pub struct SylowP {
    elements: BTreeSet<Gl2>,
    generators: Vec<Gl2>,
}

/// `{g in GL2(F7) : det g = +-1}`, order 672.
pub fn det_pm1_subgroup() -> Vec<Gl2> {
    Gl2::enumerate_gl2()
        .into_iter()
        .filter(|g| matches!(g.det().value(), 1 | 6))
        .collect()
}

/// Subgroup generated by `gens` (finite group, so closure under products suffices).
pub fn generated_subgroup(gens: &[Gl2]) -> BTreeSet<Gl2> {
    let mut set: BTreeSet<Gl2> = BTreeSet::from([Gl2::identity()]);
    let mut frontier: Vec<Gl2> = vec![Gl2::identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x * *g;
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

impl SylowP {
    /// Grows a 2-subgroup one random generator at a time until no element of
    /// the ambient group extends it to a larger 2-group.
    pub fn construct(seed: u64) -> Self {
        let mut ambient = det_pm1_subgroup();
        let mut rng = sample::rng(seed);
        ambient.shuffle(&mut rng);
        let mut generators: Vec<Gl2> = Vec::new();
        let mut elements = BTreeSet::from([Gl2::identity()]);
        loop {
            let next = ambient.iter().find_map(|g| {
                if elements.contains(g) || !g.order().is_power_of_two() {
                    return None;
                }
                let mut gens = generators.clone();
                gens.push(*g);
                let h = generated_subgroup(&gens);
                h.len().is_power_of_two().then_some((*g, h))
            });
            match next {
                Some((g, h)) => {
                    generators.push(g);
                    elements = h;
                }
                None => break,
            }
        }
        Self { elements, generators }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Gl2) -> bool {
        self.elements.contains(g)
    }

    pub fn elements(&self) -> &BTreeSet<Gl2> {
        &self.elements
    }

    pub fn generators(&self) -> &[Gl2] {
        &self.generators
    }

    /// Some `g` in `GL2(F7)` with `g self g^-1 = other`.
    pub fn conjugator_to(&self, other: &SylowP) -> Option<Gl2> {
        Gl2::enumerate_gl2().into_iter().find(|g| {
            let gi = g.inverse().expect("invertible");
            self.generators.iter().all(|p| other.contains(&(*g * *p * gi)))
        })
    }

    /// `F7^x P`, the subgroup used by the arithmetic group.
    pub fn times_scalars(&self) -> BTreeSet<Gl2> {
        F7::units()
            .flat_map(|c| self.elements.iter().map(move |p| p.scale(c)))
            .collect()
    }
}

/// The Sylow subgroup for the default seed 0.
pub fn sylow2_p() -> SylowP {
    SylowP::construct(0)
}

/// Membership in `C7 = varpi^-1(P)`.
pub fn in_c7(gamma: &MatK, p: &SylowP) -> Result<bool> {
    let g = varpi(gamma)?;
    if g.det().is_zero() {
        return Err(Error::NotInvertible);
    }
    Ok(p.contains(&g))
}

/// `theta(gamma) = (gamma gamma^dagger)^-1 det(gamma)`.
pub fn theta_of(gamma: &MatK) -> Result<KElt> {
    let c = (gamma * &dagger(gamma)).as_scalar().ok_or(Error::NotSimilitude)?;
    if c.is_zero() {
        return Err(Error::NotSimilitude);
    }
    Ok(gamma.det() / c)
}

/// `|F7^x / <level, -1>|`, the number of components for a level whose
/// `theta`-image reduces to `level` modulo `sqrt(-7)` (class number 1, units `+-1`).
pub fn component_count_for(level: &[F7]) -> usize {
    let gens: Vec<F7> = level.iter().copied().chain([F7::new(-1)]).collect();
    let mut sub: HashSet<F7> = HashSet::from([F7(1)]);
    let mut frontier = vec![F7(1)];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x * *g;
            if !y.is_zero() && sub.insert(y) {
                frontier.push(y);
            }
        }
    }
    (P as usize - 1) / sub.len()
}

/// Components for the level `C7`, whose `theta`-image is `+-1` modulo `sqrt(-7)`.
pub fn component_count() -> usize {
    component_count_for(&[F7(1), F7::new(-1)])
}

#[cfg(test)]
mod tests;
