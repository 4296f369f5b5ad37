//! The hermitian form `h(x, y) = tr_{L/K}(x bar y)` on `L` viewed as a
//! 3-dimensional `K`-space, its matrix `H`, the involution `A -> H A^* H^-1`,
//! signatures, and local equivalence of hermitian forms.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{Cubic, Mat3};
use crate::numberfield::{embed_k, is_prime, splits_in_k};
use crate::padic::PadicMat;
use crate::numberfield::Place;
use crate::scalar::rat_valuation;
use crate::{KElt, LElt, MatK, Rational};

/// Default tolerance for float inequality checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Eigenvalues closer than this to zero abort a signature computation.
pub const SIGNATURE_ZERO_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Hermitian,
    AntiHermitian,
}

/// A 3x3 matrix over `K` that is hermitian or anti-hermitian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermMat {
    m: MatK,
    kind: Symmetry,
}

impl HermMat {
    pub fn new(m: MatK, kind: Symmetry) -> Result<Self> {
        let ok = match kind {
            Symmetry::Hermitian => m.star() == m,
            Symmetry::AntiHermitian => m.star() == -m.clone(),
        };
        if ok {
            Ok(Self { m, kind })
        } else {
            Err(Error::Symmetry(match kind {
                Symmetry::Hermitian => "hermitian",
                Symmetry::AntiHermitian => "anti-hermitian",
            }))
        }
    }

    pub fn hermitian(m: MatK) -> Result<Self> {
        Self::new(m, Symmetry::Hermitian)
    }

    pub fn anti_hermitian(m: MatK) -> Result<Self> {
        Self::new(m, Symmetry::AntiHermitian)
    }

    pub fn matrix(&self) -> &MatK {
        &self.m
    }

    pub fn kind(&self) -> Symmetry {
        self.kind
    }

    /// The determinant, which is rational for a hermitian matrix.
    pub fn det(&self) -> KElt {
        self.m.det()
    }
}

fn k(a: i64, b: i64) -> KElt {
    KElt::from_ints(a, b)
}

/// `H = [[3, lb, lb], [l, 3, lb], [l, l, 3]]`.
pub fn build_h() -> MatK {
    let l = KElt::lambda;
    let lb = KElt::lambda_bar;
    Mat3::new([[k(3, 0), lb(), lb()], [l(), k(3, 0), lb()], [l(), l(), k(3, 0)]])
}

/// `W = [[l, 1, 0], [0, l, 1], [mu, 0, l]]` with `H = W W^*`.
pub fn build_w() -> MatK {
    let l = KElt::lambda;
    Mat3::new([
        [l(), k(1, 0), k(0, 0)],
        [k(0, 0), l(), k(1, 0)],
        [KElt::mu(), k(0, 0), l()],
    ])
}

pub fn build_h_herm() -> HermMat {
    HermMat::hermitian(build_h()).expect("H is hermitian")
}

/// `h(x, y) = tr_{L/K}(x bar(y))`.
pub fn gram_h(x: &LElt, y: &LElt) -> KElt {
    (x.clone() * y.conj()).trace_to_k()
}

/// Gram matrix of `h` on the `K`-basis `1, zeta, zeta^2` of `L`.
pub fn gram_matrix_h() -> MatK {
    Mat3::from_fn(|i, j| gram_h(&LElt::zeta_pow(i as i64), &LElt::zeta_pow(j as i64)))
}

/// Coordinates of `z` on the `K`-basis `1, zeta, zeta^2` of `L`.
pub fn coords_in_l(z: &LElt) -> [KElt; 3] {
    let hv: [KElt; 3] = std::array::from_fn(|j| gram_h(z, &LElt::zeta_pow(j as i64)));
    Mat3::vec_mul(&hv, h_inverse())
}

/// Matrix of a `K`-linear map of `L`, acting on coordinate row vectors from
/// the right: row `i` holds the coordinates of `f(zeta^i)`.
pub fn linear_map_matrix(f: impl Fn(&LElt) -> LElt) -> MatK {
    let rows: [[KElt; 3]; 3] = std::array::from_fn(|i| coords_in_l(&f(&LElt::zeta_pow(i as i64))));
    Mat3::new(rows)
}

/// Multiplication by `z`; a similitude of `h` when `z bar(z)` is rational.
pub fn mult_matrix(z: &LElt) -> MatK {
    linear_map_matrix(|x| z.clone() * x.clone())
}

/// The generator `sigma` of `Gal(L/K)`, a unitary map for `h`.
pub fn sigma_matrix() -> MatK {
    linear_map_matrix(|x| x.sigma())
}

/// The factor `c` with `g H g^* = c H`, if `g` is a similitude of `h`.
pub fn similitude_factor(g: &MatK) -> Option<KElt> {
    let h = build_h();
    let lhs = &(g * &h) * &g.star();
    let c = lhs.get(0, 0).clone() / h.get(0, 0).clone();
    (lhs == h.scale(&c)).then_some(c)
}

/// `A^dagger = H A^* H^-1`.
pub fn dagger(a: &MatK) -> MatK {
    &(&build_h() * &a.star()) * h_inverse()
}

fn h_inverse() -> &'static MatK {
    static H_INV: OnceLock<MatK> = OnceLock::new();
    H_INV.get_or_init(|| build_h().inverse().expect("det H = 7"))
}

/// `det(t I - A)`.
pub fn char_poly<E: crate::scalar::Ring>(a: &Mat3<E>) -> Cubic<E> {
    a.char_poly()
}

/// The reference polynomial `t^3 - 3 sqrt(-7) t^2 - 15 t - sqrt(-7)` for `Phi(b)`.
pub fn reference_char_poly_phi_b() -> Cubic<KElt> {
    let s = KElt::sqrt_m7();
    Cubic([-s.clone(), k(-15, 0), -(s.scale(&Rational::from_integer(3.into())))])
}

/// Real roots of a real-rooted monic cubic `t^3 + a t^2 + b t + c`, ascending.
fn real_cubic_roots(a: f64, b: f64, c: f64) -> [f64; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let mut roots = if p.abs() < 1e-14 {
        [shift; 3]
    } else {
        let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
        let arg = ((3.0 * q / (p * m)) * 1.0).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        std::array::from_fn(|k| shift + m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
    };
    roots.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));
    roots
}

/// Eigenvalues of a complex hermitian 3x3 matrix, ascending.
pub fn hermitian_eigenvalues(m: &Mat3<Complex64>) -> [f64; 3] {
    let Cubic([c0, c1, c2]) = m.char_poly();
    real_cubic_roots(c2.re, c1.re, c0.re)
}

/// Complex image of a matrix over `K` under `epsilon`.
pub fn embed_mat(a: &MatK) -> Mat3<Complex64> {
    a.map(embed_k)
}

/// Same, under the conjugate embedding `bar(epsilon)`.
pub fn embed_mat_conj(a: &MatK) -> Mat3<Complex64> {
    a.map(|x| embed_k(x).conj())
}

fn count_signs(eig: &[f64; 3]) -> Result<(usize, usize)> {
    if let Some(e) = eig.iter().find(|e| e.abs() < SIGNATURE_ZERO_MARGIN) {
        return Err(Error::NearZeroEigenvalue(*e));
    }
    let p = eig.iter().filter(|e| **e > 0.0).count();
    Ok((p, 3 - p))
}

/// Signature `(positive, negative)` of the hermitian matrix `A / i`, where `A`
/// is anti-hermitian, computed under `epsilon`.
pub fn signature_antihermitian(a: &HermMat) -> Result<(usize, usize)> {
    signature_antihermitian_complex(&embed_mat(a.matrix()), a.kind())
}

/// As [`signature_antihermitian`] but under the conjugate embedding.
pub fn signature_antihermitian_conj(a: &HermMat) -> Result<(usize, usize)> {
    signature_antihermitian_complex(&embed_mat_conj(a.matrix()), a.kind())
}

fn signature_antihermitian_complex(a: &Mat3<Complex64>, kind: Symmetry) -> Result<(usize, usize)> {
    if kind != Symmetry::AntiHermitian {
        return Err(Error::Symmetry("anti-hermitian"));
    }
    let over_i = a.map(|z| z / Complex64::i());
    count_signs(&hermitian_eigenvalues(&over_i))
}

/// Smallest eigenvalue of `A / i` in absolute value (the float margin).
pub fn antihermitian_margin(a: &HermMat) -> f64 {
    let over_i = embed_mat(a.matrix()).map(|z| z / Complex64::i());
    hermitian_eigenvalues(&over_i).iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min)
}

/// Signature of a hermitian matrix under `epsilon`.
pub fn signature_hermitian(a: &HermMat) -> Result<(usize, usize)> {
    if a.kind() != Symmetry::Hermitian {
        return Err(Error::Symmetry("hermitian"));
    }
    count_signs(&hermitian_eigenvalues(&embed_mat(a.matrix())))
}

/// The reference signature of `Phi(b)`: `P^* Phi(b) P = diag(-i, -i, i)`,
/// i.e. `(1, 2)` for `Phi(b)/i`.
pub const REFERENCE_SIGNATURE_PHI_B: (usize, usize) = (1, 2);

/// `H' = (lambda - bar lambda) Phi(b)`.
pub fn build_h_prime() -> MatK {
    let pb = crate::algebra::phi_over_k(&crate::DElt::b()).expect("Phi(b) over K");
    pb.scale(&KElt::sqrt_m7())
}

/// Whether two non-degenerate hermitian forms over `K` are isomorphic over
/// `K_l`, for an odd prime `l`, by comparing determinants modulo local norms.
pub fn locally_equivalent(a: &HermMat, b: &HermMat, l: u64) -> Result<bool> {
    if l == 2 {
        return Err(Error::PrimeTwoExcluded);
    }
    if !is_prime(l) {
        return Err(Error::NotOddPrime(l));
    }
    if a.kind() != Symmetry::Hermitian || b.kind() != Symmetry::Hermitian {
        return Err(Error::Symmetry("hermitian"));
    }
    let da = a.det().as_scalar().expect("hermitian determinant is rational");
    let db = b.det().as_scalar().expect("hermitian determinant is rational");
    if da.is_zero() || db.is_zero() {
        return Err(Error::NotInvertible);
    }
    let ratio = da / db;
    Ok(is_local_norm(&ratio, l))
}

/// Whether a nonzero rational is a norm from `K_l = K tensor Q_l`, `l` odd.
pub fn is_local_norm(q: &Rational, l: u64) -> bool {
    if l == 7 {
        // sqrt(-7) has norm 7, so strip the 7-part; a 7-adic unit is a norm
        // from the ramified extension iff it is a square mod 7.
        let v = rat_valuation(q, 7);
        let seven = Rational::from_integer(7.into());
        let unit = q.clone() * num_traits::pow(seven.recip(), v.max(0) as usize)
            * num_traits::pow(seven, (-v).max(0) as usize);
        let m = 7i64;
        let num = (unit.numer() % m).to_string().parse::<i64>().expect("small").rem_euclid(m);
        let den = (unit.denom() % m).to_string().parse::<i64>().expect("small").rem_euclid(m);
        let r = (num * inverse_mod(den, m)).rem_euclid(m);
        (1..m).any(|x| x * x % m == r)
    } else if splits_in_k(l) {
        // K_l = Q_l x Q_l and every element is a norm
        true
    } else {
        // unramified quadratic: norms are exactly the even-valuation elements
        rat_valuation(q, l) % 2 == 0
    }
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    (1..m).find(|x| (a * x).rem_euclid(m) == 1).expect("unit mod m")
}

/// The splitting `M3(K) tensor Q2 = M3(Q2) x M3(Q2)^op`: `A -> (A_lambda, (A_bar lambda)^T)`.
///
/// With this normalization the standard involution swaps the two factors.
pub fn split_at_2(a: &MatK, precision: u32) -> Result<(PadicMat, PadicMat)> {
    let x = PadicMat::embed(a, Place::Lambda, precision)?;
    let y = PadicMat::embed(a, Place::LambdaBar, precision)?.transpose();
    Ok((x, y))
}

/// `(x, y)^dagger = (H y H^-1, H^-1 x H)` computed in `M3(Q2) x M3(Q2)^op`,
/// with `H` taken at the place `lambda`.
pub fn dagger_on_split(pair: &(PadicMat, PadicMat), precision: u32) -> Result<(PadicMat, PadicMat)> {
    let h = PadicMat::embed(&build_h(), Place::Lambda, precision)?;
    let h_inv = h.inverse()?;
    let (x, y) = pair;
    Ok((h.mul(y).mul(&h_inv), h_inv.mul(x).mul(&h)))
}

/// Positive definiteness of a hermitian matrix under `epsilon`, returning
/// the smallest eigenvalue.
pub fn min_eigenvalue(a: &HermMat) -> f64 {
    hermitian_eigenvalues(&embed_mat(a.matrix()))[0]
}


#[cfg(test)]
mod tests;
