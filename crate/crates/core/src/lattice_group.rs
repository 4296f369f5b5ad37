//! Integral similitudes of `H`: short vectors of the lattice `O_K^3`,
//! row-by-row assembly of similitude matrices, the `k theta` decomposition
//! and membership in the arithmetic group.

use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::{build_h, dagger};
use crate::levels::{varpi, Gl2, SylowP};
use crate::matrix::{is_positive_definite, ldl_rational, Mat3};
use crate::{KElt, MatK, MatOk, OkElt, Rational};

/// Coordinates `(a0, b0, a1, b1, a2, b2)` of `v = (a_k + b_k lambda)_k`.
pub type Coords = [i64; 6];

fn to_ok(x: &Coords) -> [OkElt; 3] {
    std::array::from_fn(|k| OkElt::new(x[2 * k], x[2 * k + 1]))
}

fn h_ok() -> MatOk {
    build_h().map(|e| {
        let (a, b) = e.clone().into_parts();
        OkElt::new(a.to_integer().to_i64().expect("small"), b.to_integer().to_i64().expect("small"))
    })
}

/// `h(u, v) = u H v^*` on integral coordinates.
fn h_int(h: &MatOk, u: &[OkElt; 3], v: &[OkElt; 3]) -> OkElt {
    let mut acc = OkElt::zero();
    for i in 0..3 {
        for j in 0..3 {
            acc = acc + u[i].clone() * h.get(i, j).clone() * v[j].conj();
        }
    }
    acc
}

/// Rational Gram matrix of `v -> h(v, v)` on the `Z`-basis `e_k, lambda e_k`.
pub fn gram6() -> Vec<Vec<Rational>> {
    let h = build_h();
    let basis: Vec<[KElt; 3]> = (0..6)
        .map(|s| {
            std::array::from_fn(|k| {
                if k != s / 2 {
                    KElt::zero()
                } else if s % 2 == 0 {
                    KElt::one()
                } else {
                    KElt::lambda()
                }
            })
        })
        .collect();
    let form = |u: &[KElt; 3], v: &[KElt; 3]| {
        let mut acc = KElt::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + u[i].clone() * h.get(i, j).clone() * v[j].conj();
            }
        }
        acc.trace_to_q() / Rational::from_integer(2.into())
    };
    basis
        .iter()
        .map(|u| basis.iter().map(|v| form(u, v)).collect())
        .collect()
}

/// Value of the form at integral coordinates, exactly.
pub fn norm_of(x: &Coords) -> i64 {
    let v = to_ok(x);
    let n = h_int(&h_ok(), &v, &v);
    debug_assert!(n.b().is_zero());
    *n.a()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShortVector {
    pub coords: Coords,
    pub norm: i64,
}

impl ShortVector {
    pub fn entries(&self) -> [OkElt; 3] {
        to_ok(&self.coords)
    }
}

fn floor_sqrt_bound(q: &Rational) -> i64 {
    // an integer s with s^2 >= q
    let f = q.to_f64().expect("finite").max(0.0).sqrt().ceil() as i64 + 1;
    f.max(0)
}

/// All `v` in `O_K^3` with `h(v, v) = n`, by exact Fincke-Pohst enumeration
/// over the `LDL^T` decomposition of [`gram6`].
pub fn enumerate_short_vectors(n: u64) -> Vec<ShortVector> {
    let g = gram6();
    let (l, d) = ldl_rational(&g).expect("the form is definite");
    let n_rat = Rational::from_integer(n.into());
    let top = 5;
    let outer = candidates(&l, &d, top, &[0; 6], &n_rat);
    let mut out: Vec<ShortVector> = outer
        .into_par_iter()
        .flat_map_iter(|x5| {
            let mut x = [0i64; 6];
            x[top] = x5;
            let rem = n_rat.clone() - partial(&l, &d, top, &x);
            let mut found = Vec::new();
            descend(&l, &d, top - 1, &mut x, &rem, &mut found);
            found
        })
        .filter(|x| norm_of(x) == n as i64)
        .map(|coords| ShortVector { norm: n as i64, coords })
        .collect();
    out.sort();
    out
}

/// `D_j (x_j + sum_{i > j} L_ij x_i)^2`.
fn partial(l: &[Vec<Rational>], d: &[Rational], j: usize, x: &Coords) -> Rational {
    let mut y = Rational::from_integer(x[j].into());
    for (i, xi) in x.iter().enumerate().skip(j + 1) {
        y += &l[i][j] * Rational::from_integer((*xi).into());
    }
    &d[j] * &y * &y
}

/// Integers `x_j` with `D_j (x_j - c)^2 <= rem`, where `c` depends on `x_{>j}`.
fn candidates(l: &[Vec<Rational>], d: &[Rational], j: usize, x: &Coords, rem: &Rational) -> Vec<i64> {
    if rem.is_negative() {
        return Vec::new();
    }
    let mut c = Rational::zero();
    for (i, xi) in x.iter().enumerate().skip(j + 1) {
        c -= &l[i][j] * Rational::from_integer((*xi).into());
    }
    let s = floor_sqrt_bound(&(rem / &d[j]));
    let mid = c.round().to_integer().to_i64().expect("small");
    (mid - s..=mid + s)
        .filter(|&t| {
            let y = Rational::from_integer(t.into()) - &c;
            &d[j] * &y * &y <= *rem
        })
        .collect()
}

fn descend(
    l: &[Vec<Rational>],
    d: &[Rational],
    j: usize,
    x: &mut Coords,
    rem: &Rational,
    out: &mut Vec<Coords>,
) {
    for t in candidates(l, d, j, x, rem) {
        x[j] = t;
        let next = rem - partial(l, d, j, x);
        if j == 0 {
            if next.is_zero() {
                out.push(*x);
            }
        } else {
            descend(l, d, j - 1, x, &next, out);
        }
    }
    x[j] = 0;
}

/// A rational `t > 0` with `G - t I` positive definite, by halving from 1.
pub fn definite_margin(g: &[Vec<Rational>]) -> Rational {
    let mut t = Rational::one();
    loop {
        let shifted: Vec<Vec<Rational>> = g
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { x - &t } else { x.clone() })
                    .collect()
            })
            .collect();
        if is_positive_definite(&shifted) {
            return t;
        }
        t /= Rational::from_integer(2.into());
    }
}

/// An integral similitude `gamma H gamma^* = c H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similitude {
    matrix: MatK,
    factor: Rational,
    level_image: Gl2,
    det: KElt,
}

impl Similitude {
    /// Checks integrality and the similitude identity.
    pub fn new(matrix: MatK) -> Result<Self> {
        if !matrix.iter().all(|e| e.a().is_integer() && e.b().is_integer()) {
            return Err(Error::NotSimilitude);
        }
        let h = build_h();
        let lhs = &(&matrix * &h) * &matrix.star();
        let c = lhs.get(0, 0).clone() / h.get(0, 0).clone();
        let factor = c.as_scalar().ok_or(Error::NotSimilitude)?;
        if factor.is_zero() || lhs != h.scale(&c) {
            return Err(Error::NotSimilitude);
        }
        let level_image = varpi(&matrix)?;
        let det = matrix.det();
        Ok(Self { matrix, factor, level_image, det })
    }

    pub fn matrix(&self) -> &MatK {
        &self.matrix
    }

    pub fn factor(&self) -> &Rational {
        &self.factor
    }

    pub fn level_image(&self) -> &Gl2 {
        &self.level_image
    }

    pub fn det(&self) -> &KElt {
        &self.det
    }

    /// Whether the matrix is a scalar in `K`.
    pub fn is_scalar(&self) -> bool {
        self.matrix.as_scalar().is_some()
    }

    /// Integer coordinates of the entries, row-major, `a + b lambda -> (a, b)`.
    pub fn int_entries(&self) -> [(i64, i64); 9] {
        let v: Vec<(i64, i64)> = self
            .matrix
            .iter()
            .map(|e| (to_i64(e.a()), to_i64(e.b())))
            .collect();
        v.try_into().expect("nine entries")
    }

    pub fn compose(&self, other: &Similitude) -> Similitude {
        Similitude::new(&self.matrix * &other.matrix).expect("similitudes form a monoid")
    }
}

fn to_i64(q: &Rational) -> i64 {
    q.to_integer().to_i64().expect("small integer entry")
}

fn row_to_k(v: &[OkElt; 3]) -> [KElt; 3] {
    v.clone().map(|x| KElt::from_ints(*x.a(), *x.b()))
}

/// All `gamma` in `M3(O_K)` with `gamma H gamma^* = c H`, `c = 2^k`, sorted.
pub fn enumerate_similitudes(k: u32) -> Vec<Similitude> {
    let c = 1i64 << k;
    let h = h_ok();
    let target = |i: usize, j: usize| h.get(i, j).clone() * OkElt::new(c, 0);
    let rows: Vec<[OkElt; 3]> = enumerate_short_vectors(3 * c as u64).iter().map(ShortVector::entries).collect();
    let mut out: Vec<(Vec<(i64, i64)>, Similitude)> = rows
        .par_iter()
        .flat_map_iter(|v0| {
            let second: Vec<&[OkElt; 3]> = rows.iter().filter(|v| h_int(&h, v0, v) == target(0, 1)).collect();
            let third: Vec<&[OkElt; 3]> = rows.iter().filter(|v| h_int(&h, v0, v) == target(0, 2)).collect();
            let mut found = Vec::new();
            for v1 in &second {
                for v2 in &third {
                    if h_int(&h, v1, v2) == target(1, 2) {
                        let m = Mat3::new([row_to_k(v0), row_to_k(v1), row_to_k(v2)]);
                        found.push(Similitude::new(m).expect("rows satisfy the Gram identities"));
                    }
                }
            }
            found
        })
        .map(|s| (s.int_entries().to_vec(), s))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, s)| s).collect()
}

/// `gamma = k theta` with `k = (gamma gamma^dagger)^-1 det gamma` and `theta theta^dagger = 1`.
pub fn normalize_k_theta(gamma: &Similitude) -> (KElt, MatK) {
    let k = gamma.det().clone() / KElt::from_scalar(gamma.factor().clone());
    let theta = gamma.matrix().scale(&k.inverse().expect("k is nonzero"));
    (k, theta)
}

/// Membership of the image of `gamma` in the adjoint group: some scalar
/// multiple of `gamma` integral away from 2 lies in `C7`, i.e.
/// `varpi(gamma)` lies in `F7^x P`.
pub fn in_gamma_mum(gamma: &Similitude, p: &SylowP) -> bool {
    let g = gamma.level_image();
    crate::levels::F7::units().any(|s| p.contains(&g.scale(s)))
}

/// Membership through the unitary part: `theta = k^-1 gamma` satisfies
/// `theta theta^dagger = 1` and lies in `C7`.
pub fn in_gamma_mum_unitary(gamma: &Similitude, p: &SylowP) -> Result<bool> {
    let (_, theta) = normalize_k_theta(gamma);
    if &theta * &dagger(&theta) != MatK::identity() {
        return Ok(false);
    }
    Ok(p.contains(&varpi(&theta)?))
}

const FORMAT_HEADER: &str = "similitudes v1";

/// Line-based text form: a header, then per similitude its factor followed
/// by the nine entries `a,b` (for `a + b lambda`) in row-major order.
pub fn write_similitudes(list: &[Similitude]) -> String {
    let mut s = String::new();
    writeln!(s, "{FORMAT_HEADER}").expect("string write");
    for g in list {
        write!(s, "{}", g.factor()).expect("string write");
        for (a, b) in g.int_entries() {
            write!(s, " {a},{b}").expect("string write");
        }
        s.push('\n');
    }
    s
}

pub fn parse_similitudes(text: &str) -> Result<Vec<Similitude>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == FORMAT_HEADER => {}
        other => return Err(Error::Parse(format!("bad header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", n + 2));
            let mut parts = line.split_whitespace();
            let factor: Rational = parts
                .next()
                .ok_or_else(|| bad("missing factor"))?
                .parse()
                .map_err(|_| bad("bad factor"))?;
            let entries: Vec<KElt> = parts
                .map(|p| {
                    let (a, b) = p.split_once(',').ok_or_else(|| bad("entry is not a,b"))?;
                    let a: i64 = a.parse().map_err(|_| bad("bad integer"))?;
                    let b: i64 = b.parse().map_err(|_| bad("bad integer"))?;
                    Ok(KElt::from_ints(a, b))
                })
                .collect::<Result<_>>()?;
            if entries.len() != 9 {
                return Err(bad("expected nine entries"));
            }
            let m = Mat3::from_fn(|i, j| entries[3 * i + j].clone());
            let g = Similitude::new(m)?;
            if g.factor() != &factor {
                return Err(bad("factor does not match the matrix"));
            }
            Ok(g)
        })
        .collect()
}
