//! Vertices of the Bruhat-Tits building of `PGL3(Q2)` as homothety classes
//! of `Z2`-lattices, the action of similitudes through the place `lambda`,
//! and the transitivity and stabilizer checks for the arithmetic group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice_group::{enumerate_similitudes, in_gamma_mum, Similitude};
use crate::levels::SylowP;
use crate::numberfield::{valuation, Place, Valuation};
use crate::padic::{PadicMat, DEFAULT_PRECISION, MAX_PRECISION};
use crate::MatK;

/// Default largest radius for balls and transitivity checks.
pub const DEFAULT_MAX_RADIUS: u32 = 3;
/// Default largest `k` for similitude factors `2^k` used as witnesses.
pub const DEFAULT_MAX_FACTOR_EXP: u32 = 3;

/// A homothety class of lattices, stored as the Hermite normal form of a
/// basis (rows): upper triangular, diagonal `2^e_i`, entries above the
/// diagonal reduced modulo the diagonal entry of their column, and scaled so
/// that the lattice is not contained in `2 Z2^3`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BuildingVertex {
    rep: [[BigInt; 3]; 3],
}

fn two_pow(e: u32) -> BigInt {
    BigInt::one() << e
}

fn val2(x: &BigInt, cap: u32) -> u32 {
    if x.is_zero() {
        cap
    } else {
        (x.trailing_zeros().expect("nonzero") as u32).min(cap)
    }
}

/// Inverse of an odd `u` modulo `2^n`.
fn odd_inverse(u: &BigInt, n: u32) -> BigInt {
    let m = two_pow(n);
    let mut x = BigInt::one();
    // Newton: x <- x (2 - u x) doubles the number of correct bits
    let mut bits = 1;
    while bits < n {
        x = (&x * (BigInt::from(2) - u * &x)).mod_floor(&m);
        bits *= 2;
    }
    x.mod_floor(&m)
}

/// HNF of the lattice generated by `rows` and `2^n Z^3`, computed modulo `2^n`.
fn hnf_mod(rows: &[[BigInt; 3]], n: u32) -> [[BigInt; 3]; 3] {
    let m = two_pow(n);
    let mut rs: Vec<[BigInt; 3]> = rows.iter().map(|r| r.clone().map(|x| x.mod_floor(&m))).collect();
    let mut pivots: Vec<[BigInt; 3]> = Vec::with_capacity(3);
    for j in 0..3 {
        let best = rs
            .iter()
            .enumerate()
            .map(|(i, r)| (val2(&r[j], n), i))
            .filter(|&(v, _)| v < n)
            .min();
        let p = match best {
            Some((e, i)) => {
                let p = rs.swap_remove(i);
                let inv = odd_inverse(&(&p[j] >> e), n);
                let mut p = p.map(|x| (x * &inv).mod_floor(&m));
                p[j] = two_pow(e);
                for r in rs.iter_mut() {
                    if r[j].is_zero() {
                        continue;
                    }
                    let q = &r[j] >> e;
                    for c in 0..3 {
                        r[c] = (&r[c] - &q * &p[c]).mod_floor(&m);
                    }
                }
                p
            }
            // column j vanishes modulo 2^n on the remaining rows
            None => {
                let mut p = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                p[j] = m.clone();
                p
            }
        };
        pivots.push(p);
    }
    // reduce above the diagonal, left to right
    for j in 0..3 {
        let d = pivots[j][j].clone();
        let pj = pivots[j].clone();
        for row in pivots.iter_mut().take(j) {
            let q = row[j].div_floor(&d);
            if !q.is_zero() {
                for c in 0..3 {
                    row[c] -= &q * &pj[c];
                }
            }
        }
    }
    [pivots[0].clone(), pivots[1].clone(), pivots[2].clone()]
}

impl BuildingVertex {
    /// Canonical class of the lattice spanned by `rows` together with
    /// `2^n Z2^3`; exact when the lattice already contains `2^n Z2^3`.
    fn from_generators(rows: &[[BigInt; 3]], n: u32) -> Self {
        let h = hnf_mod(rows, n);
        let shift = h.iter().flatten().map(|x| val2(x, n)).min().expect("nine entries");
        let rep = h.map(|r| r.map(|x| x >> shift));
        Self { rep }
    }

    /// The class of the lattice spanned by the rows of an integer matrix of
    /// full rank.
    pub fn from_rows(rows: [[i64; 3]; 3]) -> Result<Self> {
        let big = rows.map(|r| r.map(BigInt::from));
        let det = det3(&big);
        if det.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = val2(&det, u32::MAX) + 1;
        Ok(Self::from_generators(&big, n))
    }

    pub fn rep(&self) -> &[[BigInt; 3]; 3] {
        &self.rep
    }

    /// The representative as machine integers, when it fits.
    pub fn rep_u64(&self) -> Option<[[u64; 3]; 3]> {
        let flat: Vec<u64> = self.rep.iter().flatten().map(|x| x.to_u64()).collect::<Option<_>>()?;
        Some(std::array::from_fn(|i| std::array::from_fn(|j| flat[3 * i + j])))
    }

    /// Exponents `e_i` of the diagonal.
    pub fn exponents(&self) -> [u32; 3] {
        std::array::from_fn(|i| self.rep[i][i].trailing_zeros().expect("nonzero diagonal") as u32)
    }

    /// `v2(det)` of the representative.
    pub fn det_valuation(&self) -> u32 {
        self.exponents().iter().sum()
    }

    /// Type in `Z/3`.
    pub fn vertex_type(&self) -> u32 {
        self.det_valuation() % 3
    }

    fn big_rows(&self) -> [[BigInt; 3]; 3] {
        self.rep.clone()
    }

    /// Whether the stored matrix is its own normal form.
    pub fn is_normalized(&self) -> bool {
        let n = self.det_valuation() + 1;
        Self::from_generators(&self.big_rows(), n) == *self
    }

    /// The 14 classes `[M]` with `2L < M < L`, sorted.
    pub fn neighbors(&self) -> Vec<BuildingVertex> {
        let rows = self.big_rows();
        let doubled: Vec<[BigInt; 3]> = rows.iter().map(|r| r.clone().map(|x| x * 2)).collect();
        let n = self.det_valuation() + 4;
        let mut out: Vec<BuildingVertex> = proper_subspaces_f2()
            .into_iter()
            .map(|basis| {
                let mut gens = doubled.clone();
                for w in basis {
                    let mut v = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                    for (k, bit) in w.iter().enumerate() {
                        if *bit {
                            for c in 0..3 {
                                v[c] += &rows[k][c];
                            }
                        }
                    }
                    gens.push(v);
                }
                Self::from_generators(&gens, n)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Graph distance: `max - min` of the elementary divisor exponents of
    /// one lattice relative to the other.
    pub fn distance(&self, other: &BuildingVertex) -> u32 {
        // rows of other expressed in self's basis, up to the scalar det(self)
        let a = self.big_rows();
        let b = other.big_rows();
        let rel = mat_mul(&b, &adjugate(&a));
        let cap = u32::MAX;
        let d1 = rel.iter().flatten().map(|x| val2(x, cap)).min().expect("entries");
        let mut d2 = cap;
        for (r0, r1) in [(0, 1), (0, 2), (1, 2)] {
            for (c0, c1) in [(0, 1), (0, 2), (1, 2)] {
                let minor = &rel[r0][c0] * &rel[r1][c1] - &rel[r0][c1] * &rel[r1][c0];
                d2 = d2.min(val2(&minor, cap));
            }
        }
        let d3 = val2(&det3(&rel), cap);
        // exponents d1 <= d2 - d1 <= d3 - d2
        (d3 - d2) - d1
    }
}

impl fmt::Debug for BuildingVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rep)
    }
}

impl fmt::Display for BuildingVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.rep;
        write!(f, "[{} {} {}; {} {} {}; {} {} {}]", a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2])
    }
}

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn adjugate(m: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
    })
}

fn mat_mul(a: &[[BigInt; 3]; 3], b: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum())
    })
}

/// Bases of the proper nonzero subspaces of `F2^3`: 7 lines, then 7 planes.
fn proper_subspaces_f2() -> Vec<Vec<[bool; 3]>> {
    let vecs: Vec<[bool; 3]> = (1u8..8).map(|m| [m & 1 != 0, m & 2 != 0, m & 4 != 0]).collect();
    let mut out: Vec<Vec<[bool; 3]>> = vecs.iter().map(|v| vec![*v]).collect();
    let mut planes: BTreeSet<u8> = BTreeSet::new();
    for a in 1u8..8 {
        for b in (a + 1)..8 {
            let mask = (1u8 << a) | (1u8 << b) | (1u8 << (a ^ b));
            if planes.insert(mask) {
                out.push(vec![vecs[(a - 1) as usize], vecs[(b - 1) as usize]]);
            }
        }
    }
    out
}

/// The class of `Z2^3`.
pub fn standard_vertex() -> BuildingVertex {
    BuildingVertex { rep: [[1, 0, 0], [0, 1, 0], [0, 0, 1]].map(|r| r.map(BigInt::from)) }
}

/// All vertices within distance `r` of `v`, sorted.
pub fn ball(v: &BuildingVertex, r: u32) -> Vec<BuildingVertex> {
    ball_layers(v, r).into_iter().flatten().collect::<BTreeSet<_>>().into_iter().collect()
}

/// BFS layers: `layers[d]` holds the vertices at distance exactly `d`.
pub fn ball_layers(v: &BuildingVertex, r: u32) -> Vec<Vec<BuildingVertex>> {
    let mut seen: BTreeSet<BuildingVertex> = BTreeSet::from([v.clone()]);
    let mut layers = vec![vec![v.clone()]];
    for _ in 0..r {
        let frontier = layers.last().expect("nonempty");
        let next: BTreeSet<BuildingVertex> = frontier
            .par_iter()
            .flat_map_iter(|u| u.neighbors())
            .collect::<Vec<_>>()
            .into_iter()
            .filter(|u| !seen.contains(u))
            .collect();
        seen.extend(next.iter().cloned());
        layers.push(next.into_iter().collect());
    }
    layers
}

/// `[gamma L]` with `gamma` embedded at the place `lambda`: the new basis
/// rows are the rows of `B gamma^T`. Precision starts at `precision` and
/// doubles up to the ceiling.
pub fn act(gamma: &MatK, v: &BuildingVertex, precision: u32) -> Result<BuildingVertex> {
    let det = gamma.det();
    let det_val = match valuation(&det, Place::Lambda)? {
        Valuation::Finite(x) => x,
        Valuation::Infinity => return Err(Error::NotInvertible),
    };
    let mut n = precision.max(1);
    loop {
        let g = PadicMat::embed(gamma, Place::Lambda, n)?;
        // g = 2^scale M with M integral; scalars act trivially, so use M
        let needed = i64::from(v.det_valuation()) + det_val - 3 * g.scale() + 1;
        if i64::from(g.precision()) >= needed {
            let m = g.residues();
            let b = v.big_rows();
            let rows: Vec<[BigInt; 3]> = b
                .iter()
                .map(|row| std::array::from_fn(|i| (0..3).map(|k| &row[k] * &m[i][k]).sum()))
                .collect();
            return Ok(BuildingVertex::from_generators(&rows, g.precision()));
        }
        if n >= MAX_PRECISION {
            return Err(Error::PrecisionCeiling(MAX_PRECISION));
        }
        n = (n * 2).min(MAX_PRECISION);
    }
}

/// [`act`] at the default working precision.
pub fn act_default(gamma: &MatK, v: &BuildingVertex) -> Result<BuildingVertex> {
    act(gamma, v, DEFAULT_PRECISION)
}

/// A witness for one vertex of the ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub vertex: BuildingVertex,
    pub distance: u32,
    /// Exponent `k` of the similitude factor `2^k`.
    pub factor_exp: u32,
    pub gamma: Similitude,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityReport {
    pub radius: u32,
    /// Exponents `k` of the similitude factors `2^k` that were searched.
    pub factor_exps: Vec<u32>,
    /// Number of vertices at each distance `0..=radius`.
    pub layer_sizes: Vec<usize>,
    /// Number of reached vertices at each distance.
    pub reached: Vec<usize>,
    pub witnesses: Vec<Witness>,
    pub unreached: Vec<BuildingVertex>,
    /// Members of the group examined, per entry of `factor_exps`.
    pub members_examined: Vec<usize>,
    /// Non-scalar members fixing the standard vertex.
    pub stabilizers: Vec<Similitude>,
}

impl TransitivityReport {
    pub fn all_reached(&self) -> bool {
        self.unreached.is_empty()
    }

    pub fn stabilizer_free(&self) -> bool {
        self.stabilizers.is_empty()
    }
}

/// Group members with factor `2^k`, `k <= max_factor_exp`, from the enumerations.
pub fn group_members(max_factor_exp: u32, p: &SylowP) -> Vec<(u32, Similitude)> {
    let exps: Vec<u32> = (0..=max_factor_exp).collect();
    group_members_for(&exps, p)
}

/// Group members with factor `2^k` for each listed `k`.
pub fn group_members_for(factor_exps: &[u32], p: &SylowP) -> Vec<(u32, Similitude)> {
    factor_exps
        .iter()
        .flat_map(|&k| {
            enumerate_similitudes(k)
                .into_iter()
                .filter(|g| in_gamma_mum(g, p))
                .map(move |g| (k, g))
        })
        .collect()
}

/// Images of the standard vertex under the group members, with a witness
/// for each vertex in the ball of radius `r`, and the stabilizer audit.
pub fn check_transitivity(r: u32, max_factor_exp: u32, p: &SylowP) -> Result<TransitivityReport> {
    let exps: Vec<u32> = (0..=max_factor_exp).collect();
    check_transitivity_for(r, &exps, p, DEFAULT_PRECISION)
}

/// [`check_transitivity`] over an explicit set of factor exponents and a
/// starting 2-adic precision.
pub fn check_transitivity_for(
    r: u32,
    factor_exps: &[u32],
    p: &SylowP,
    precision: u32,
) -> Result<TransitivityReport> {
    let std_v = standard_vertex();
    let layers = ball_layers(&std_v, r);
    let members = group_members_for(factor_exps, p);
    let images: Vec<Result<BuildingVertex>> = members
        .par_iter()
        .map(|(_, g)| act(g.matrix(), &std_v, precision))
        .collect();
    let mut first_hit: BTreeMap<BuildingVertex, usize> = BTreeMap::new();
    let mut stabilizers = Vec::new();
    for (i, img) in images.into_iter().enumerate() {
        let img = img?;
        if img == std_v && !members[i].1.is_scalar() {
            stabilizers.push(members[i].1.clone());
        }
        first_hit.entry(img).or_insert(i);
    }
    let mut witnesses = Vec::new();
    let mut unreached = Vec::new();
    let mut reached = vec![0; layers.len()];
    for (d, layer) in layers.iter().enumerate() {
        for v in layer {
            match first_hit.get(v) {
                Some(&i) => {
                    reached[d] += 1;
                    witnesses.push(Witness {
                        vertex: v.clone(),
                        distance: d as u32,
                        factor_exp: members[i].0,
                        gamma: members[i].1.clone(),
                    });
                }
                None => unreached.push(v.clone()),
            }
        }
    }
    let members_examined = factor_exps
        .iter()
        .map(|&k| members.iter().filter(|(kk, _)| *kk == k).count())
        .collect();
    Ok(TransitivityReport {
        radius: r,
        factor_exps: factor_exps.to_vec(),
        layer_sizes: layers.iter().map(Vec::len).collect(),
        reached,
        witnesses,
        unreached,
        members_examined,
        stabilizers,
    })
}

#[cfg(test)]
mod tests;
