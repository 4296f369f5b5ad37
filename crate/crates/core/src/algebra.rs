//! The cyclic division algebra `D = L + L Pi + L Pi^2` over `K` with
//! `Pi^3 = mu` and `Pi z = sigma(z) Pi`, together with its involutions,
//! the form `psi`, the order `O_D` and the group `G`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::hermitian;
use crate::matrix::Mat3;
use crate::numberfield::{is_unit_above, valuation, CycloElt, Place, QuadElt};
use crate::sample;
use crate::scalar::FieldScalar;
use crate::{DElt, KElt, LElt, MatK, MatL, Rational};

/// `x0 + x1 Pi + x2 Pi^2` with `x_i` in `L`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DivElt<T> {
    x: [CycloElt<T>; 3],
}

fn mu_l<T: FieldScalar>() -> CycloElt<T> {
    QuadElt::<T>::mu().into()
}

impl<T: FieldScalar> DivElt<T> {
    pub fn new(x: [CycloElt<T>; 3]) -> Self {
        Self { x }
    }

    pub fn coeffs(&self) -> &[CycloElt<T>; 3] {
        &self.x
    }

    pub fn from_l(z: CycloElt<T>) -> Self {
        Self::new([z, CycloElt::zero(), CycloElt::zero()])
    }

    pub fn from_k(z: QuadElt<T>) -> Self {
        Self::from_l(z.into())
    }

    pub fn pi() -> Self {
        Self::new([CycloElt::zero(), CycloElt::one(), CycloElt::zero()])
    }

    pub fn pi_sq() -> Self {
        Self::new([CycloElt::zero(), CycloElt::zero(), CycloElt::one()])
    }

    /// `b = (lambda - bar lambda) - bar(lambda) Pi + bar(lambda) Pi^2`.
    pub fn b() -> Self {
        let lb: CycloElt<T> = QuadElt::<T>::lambda_bar().into();
        Self::new([QuadElt::<T>::sqrt_m7().into(), -lb.clone(), lb])
    }

    /// The matrix presentation: `z -> diag(z, sigma^2 z, sigma z)` and
    /// `Pi -> [[0,0,mu],[1,0,0],[0,1,0]]`.
    pub fn phi(&self) -> Mat3<CycloElt<T>> {
        let mu = mu_l::<T>();
        let [a0, a1, a2] = self.x.clone();
        let [b0, b1, b2] = self.x.clone().map(|x| x.sigma_pow(2));
        let [c0, c1, c2] = self.x.clone().map(|x| x.sigma_pow(1));
        Mat3::new([[a0, mu.clone() * a2, mu.clone() * a1], [b1, b0, mu * b2], [c2, c1, c0]])
    }

    /// `Q = Phi(Pi)`.
    pub fn phi_pi() -> Mat3<CycloElt<T>> {
        let z = CycloElt::zero;
        let o = CycloElt::one;
        Mat3::new([[z(), z(), mu_l()], [o(), z(), z()], [z(), o(), z()]])
    }

    /// Inverse of `phi` on its image: the first column of `phi(y)` is
    /// `(y0, sigma^2 y1, sigma y2)`.
    pub fn from_phi(m: &Mat3<CycloElt<T>>) -> Self {
        Self::new([
            m.get(0, 0).clone(),
            m.get(1, 0).sigma_pow(1),
            m.get(2, 0).sigma_pow(2),
        ])
    }

    pub fn inverse(&self) -> Option<Self> {
        let m = self.phi();
        let nrd = m.det().as_quad().expect("reduced norm lies in K");
        let inv: CycloElt<T> = nrd.inverse()?.into();
        Some(Self::from_phi(&m.adjugate().scale(&inv)))
    }

    /// The involution `*`: `Pi* = bar(mu) Pi^2`, `z* = bar z`.
    pub fn star(&self) -> Self {
        // (Pi^2)* = bar(mu) Pi, and Pi^i z = sigma^i(z) Pi^i
        let mu_bar: CycloElt<T> = QuadElt::<T>::mu_bar().into();
        let [x0, x1, x2] = &self.x;
        Self::new([x0.conj(), mu_bar.clone() * x2.conj().sigma(), mu_bar * x1.conj().sigma().sigma()])
    }

    /// `x^bigstar = b x^* b^{-1}`.
    pub fn bigstar(&self) -> Self {
        let b = Self::b();
        let b_inv = b.inverse().expect("b is invertible");
        b * self.star() * b_inv
    }

    /// Reduced trace `tr(phi(x))`, an element of `K`.
    pub fn reduced_trace(&self) -> QuadElt<T> {
        self.phi().trace().as_quad().expect("reduced trace lies in K")
    }

    /// Reduced norm `det(phi(x))`, an element of `K`.
    pub fn reduced_norm(&self) -> QuadElt<T> {
        self.phi().det().as_quad().expect("reduced norm lies in K")
    }

    /// `tr_{D/Q} = tr_{K/Q} o Trd`.
    pub fn trace_to_q(&self) -> T {
        self.reduced_trace().trace_to_q()
    }

    /// The rational scalar `c` if `self = c`.
    pub fn as_rational(&self) -> Option<T> {
        if self.x[1].is_zero() && self.x[2].is_zero() {
            self.x[0].as_scalar()
        } else {
            None
        }
    }

    /// Basis `zeta^k Pi^i` of `D` over `Q` (`k < 6`, `i < 3`).
    pub fn q_basis() -> Vec<Self> {
        let mut out = Vec::with_capacity(18);
        for i in 0..3 {
            for k in 0..6 {
                let mut x: [CycloElt<T>; 3] = std::array::from_fn(|_| CycloElt::zero());
                x[i] = CycloElt::basis(k);
                out.push(Self::new(x));
            }
        }
        out
    }
}

impl<T: FieldScalar> Zero for DivElt<T> {
    fn zero() -> Self {
        Self::from_l(CycloElt::zero())
    }
    fn is_zero(&self) -> bool {
        self.x.iter().all(Zero::is_zero)
    }
}

impl<T: FieldScalar> One for DivElt<T> {
    fn one() -> Self {
        Self::from_l(CycloElt::one())
    }
}

impl<T: FieldScalar> Add for DivElt<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a0, a1, a2] = self.x;
        let [b0, b1, b2] = rhs.x;
        Self::new([a0 + b0, a1 + b1, a2 + b2])
    }
}

impl<T: FieldScalar> Neg for DivElt<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.x.map(|c| -c))
    }
}

impl<T: FieldScalar> Sub for DivElt<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: FieldScalar> Mul for DivElt<T> {
    type Output = Self;
    // (x_i Pi^i)(y_j Pi^j) = x_i sigma^i(y_j) Pi^(i+j), Pi^3 = mu central
    fn mul(self, rhs: Self) -> Self {
        let mu = mu_l::<T>();
        let mut out: [CycloElt<T>; 3] = std::array::from_fn(|_| CycloElt::zero());
        for (i, xi) in self.x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in rhs.x.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let mut t = xi.clone() * yj.sigma_pow(i as i64);
                if i + j >= 3 {
                    t = t * mu.clone();
                }
                let k = (i + j) % 3;
                out[k] = out[k].clone() + t;
            }
        }
        Self::new(out)
    }
}

/// `psi(x, y) = tr_{D/Q}(y b x^*)`.
pub fn psi(x: &DElt, y: &DElt) -> Rational {
    (y.clone() * DElt::b() * x.star()).trace_to_q()
}

/// Gram matrix of `psi` on [`DivElt::q_basis`] (18 x 18).
pub fn psi_gram() -> Vec<Vec<Rational>> {
    let basis = DElt::q_basis();
    basis
        .iter()
        .map(|x| basis.iter().map(|y| psi(x, y)).collect())
        .collect()
}

fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

/// Membership in `O_L = Z[zeta]`.
pub fn in_ol(y: &LElt) -> bool {
    y.all_coeffs(is_integer)
}

/// Integrality of `y` at every prime of `L` above `place`.
pub fn in_ol_at(y: &LElt, place: Place) -> bool {
    let d = y
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    match place {
        Place::Lambda | Place::LambdaBar => {
            // y = w / (odd * lambda^e bar(lambda)^e); clear the factors that are
            // units at the chosen place and test what is left globally.
            let e = d.trailing_zeros().unwrap_or(0) as usize;
            let odd = &d >> e;
            let unit_at_place = match place {
                Place::Lambda => KElt::lambda_bar(),
                _ => KElt::lambda(),
            };
            let s = (0..e).fold(LElt::from_scalar(Rational::from_integer(odd)), |acc, _| {
                acc * unit_at_place.clone().into()
            });
            in_ol(&(s * y.clone()))
        }
        Place::Seven => (&d % BigInt::from(7)) != BigInt::zero(),
        Place::Rational(l) => (&d % BigInt::from(l)) != BigInt::zero(),
        _ => true,
    }
}

/// Membership in `O_D = O_L + O_L bar(lambda) Pi + O_L bar(lambda) Pi^2`,
/// globally or after localizing at `localized_at`.
pub fn in_order_od(x: &DElt, localized_at: Option<Place>) -> bool {
    let lb_inv: LElt = KElt::lambda_bar().inverse().expect("nonzero").into();
    let parts = [
        x.coeffs()[0].clone(),
        x.coeffs()[1].clone() * lb_inv.clone(),
        x.coeffs()[2].clone() * lb_inv,
    ];
    match localized_at {
        None => parts.iter().all(in_ol),
        Some(p) => parts.iter().all(|y| in_ol_at(y, p)),
    }
}

/// Local invariants of `D` at the places above 2 and at the given odd primes,
/// as rationals in `(-1/2, 1/2]`.
///
/// At a place `v` unramified in `L/K` where `sigma` is the Frobenius, the
/// invariant of the cyclic algebra is `v(mu)/3`. At an odd place where `mu`
/// is a unit it is 0. The ramified place above 7 gets the value forced by the
/// sum formula.
pub fn hasse_invariants(odd_primes: &[u64]) -> BTreeMap<Place, Rational> {
    let mu = KElt::mu();
    let reduce = |q: Rational| -> Rational {
        // representative in (-1/2, 1/2]
        let f = q.clone() - q.floor();
        if f > Rational::new(1.into(), 2.into()) {
            f - Rational::one()
        } else {
            f
        }
    };
    let mut out = BTreeMap::new();
    for place in [Place::Lambda, Place::LambdaBar] {
        let v = valuation(&mu, place).expect("finite place").finite().expect("mu nonzero");
        out.insert(place, reduce(Rational::new(v.into(), 3.into())));
    }
    for &l in odd_primes {
        if l == 7 {
            continue;
        }
        assert!(is_unit_above(&mu, l), "mu is a unit above {l}");
        // Place::Rational labels the prime; for split primes both places above l carry 0
        out.insert(Place::Rational(l), Rational::zero());
    }
    let sum: Rational = out.values().cloned().sum();
    out.insert(Place::Seven, reduce(-sum));
    out
}

/// Membership in `G`: returns `c` with `x x^bigstar = c` when that product is a
/// nonzero rational.
pub fn in_group_g(x: &DElt) -> Option<Rational> {
    let p = x.clone() * x.bigstar();
    p.as_rational().filter(|c| !c.is_zero())
}

/// Outcome of the inner-form identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerFormReport {
    /// `Q^-1 sigma(Phi(x)) Q = Phi(x)` on the Q-basis of `D`.
    pub galois_twist_fixes_phi: bool,
    /// `Phi(b) Q = Q Phi(b)`.
    pub phi_b_commutes_with_q: bool,
    /// Conjugation by `(1, u)` intertwines `i_u` and `i_1`, for `u = H` and `u = Phi(b)`.
    pub transport_holds: bool,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl InnerFormReport {
    pub fn all_hold(&self) -> bool {
        self.galois_twist_fixes_phi && self.phi_b_commutes_with_q && self.transport_holds
    }
}

/// Involution `i_u(x, y) = (u y u^-1, u^-1 x u)` on `A x A^op`.
pub fn involution_i<E>(u: &Mat3<E>, pair: &(Mat3<E>, Mat3<E>)) -> (Mat3<E>, Mat3<E>)
where
    E: crate::scalar::Ring + std::ops::Div<Output = E>,
{
    let u_inv = u.inverse().expect("u invertible");
    let (x, y) = pair;
    (u * &(y * &u_inv), &u_inv * &(x * u))
}

/// Conjugation by `(1, u)`: `(x, y) -> (x, u y u^-1)`.
pub fn transport<E>(u: &Mat3<E>, pair: &(Mat3<E>, Mat3<E>)) -> (Mat3<E>, Mat3<E>)
where
    E: crate::scalar::Ring + std::ops::Div<Output = E>,
{
    let u_inv = u.inverse().expect("u invertible");
    (pair.0.clone(), u * &(&pair.1 * &u_inv))
}

pub fn check_inner_form_data(samples: usize, seed: u64) -> InnerFormReport {
    let mut failures = Vec::new();
    let q = DElt::phi_pi();
    let q_inv = q.inverse().expect("Q invertible");

    let galois_twist_fixes_phi = DElt::q_basis().iter().enumerate().all(|(n, x)| {
        let m = x.phi();
        let ok = &q_inv * &(&m.map(|e| e.sigma()) * &q) == m;
        if !ok {
            failures.push(format!("sigma-twist fails on basis element {n}"));
        }
        ok
    });

    let pb = DElt::b().phi();
    let phi_b_commutes_with_q = &pb * &q == &q * &pb;
    if !phi_b_commutes_with_q {
        failures.push("Phi(b) Q != Q Phi(b)".into());
    }

    let h = hermitian::build_h();
    let pb_k: MatK = pb.map(|e| e.as_quad().expect("Phi(b) has entries in K"));
    let mut rng = sample::rng(seed);
    let mut transport_holds = true;
    for n in 0..samples {
        let pair = (sample::mat_k(&mut rng), sample::mat_k(&mut rng));
        for (name, u) in [("H", &h), ("Phi(b)", &pb_k)] {
            // u^* u^-1 must be central for i_u to be an involution
            let central = (u.star() * u.inverse().expect("invertible")).as_scalar().is_some();
            let lhs = transport(u, &involution_i(u, &pair));
            let rhs = involution_i(&MatK::identity(), &transport(u, &pair));
            if !central || lhs != rhs {
                transport_holds = false;
                failures.push(format!("transport fails for u = {name} on sample {n}"));
            }
        }
    }
    InnerFormReport {
        galois_twist_fixes_phi,
        phi_b_commutes_with_q,
        transport_holds,
        samples,
        failures,
    }
}

/// `Phi(x)` with `K`-valued entries, when all entries lie in `K`.
pub fn phi_over_k(x: &DElt) -> Option<MatK> {
    let m: MatL = x.phi();
    let entries: Option<Vec<KElt>> = m.iter().map(|e| e.as_quad()).collect();
    entries.map(|v| Mat3::from_fn(|i, j| v[3 * i + j].clone()))
}
