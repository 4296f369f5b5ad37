use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::scalar::rat;
use crate::{KElt, LElt, Rational};

fn l_elt() -> impl Strategy<Value = LElt> {
    (prop::array::uniform6(-6i64..=6), 1i64..=4)
        .prop_map(|(c, d)| LElt::new(c.map(|x| rat(x, d))))
}

fn k_elt() -> impl Strategy<Value = KElt> {
    (-12i64..=12, -12i64..=12, 1i64..=8).prop_map(|(a, b, d)| KElt::new(rat(a, d), rat(b, d)))
}

fn lam() -> KElt {
    KElt::lambda()
}

#[test]
fn zeta_times_zeta6_is_one() {
    assert_eq!(LElt::zeta() * LElt::zeta_pow(6), LElt::one());
    assert_eq!(LElt::zeta_pow(7), LElt::one());
}

#[test]
fn lambda_norm_and_trace() {
    let l = LElt::lambda();
    let lb: LElt = KElt::lambda_bar().into();
    assert_eq!(l.clone() * lb.clone(), LElt::from_int(2));
    assert_eq!(l + lb, LElt::from_int(-1));
    // the same identities inside K
    assert_eq!(lam() * KElt::lambda_bar(), KElt::from_ints(2, 0));
    assert_eq!(lam() * lam() + lam() + KElt::from_ints(2, 0), KElt::zero());
    assert_eq!(KElt::sqrt_m7() * KElt::sqrt_m7(), KElt::from_ints(-7, 0));
}

#[test]
fn lambda_bar_is_conjugate_of_lambda_in_l() {
    let lb: LElt = KElt::lambda_bar().into();
    assert_eq!(LElt::lambda().conj(), lb);
    assert_eq!(
        LElt::zeta_pow(3) + LElt::zeta_pow(5) + LElt::zeta_pow(6),
        KElt::lambda_bar().into()
    );
}

#[test]
fn sigma_examples() {
    assert_eq!(LElt::zeta().sigma(), LElt::zeta_pow(2));
    assert_eq!(LElt::lambda().sigma(), LElt::lambda());
    let x = LElt::new([1, 2, 3, 4, 5, 6].map(|c| rat(c, 1)));
    assert_eq!(x.sigma_pow(0), x);
    assert_eq!(x.sigma_pow(3), x);
    assert_eq!(x.sigma_pow(6), x);
    // conjugation is zeta -> zeta^6, not a power of sigma
    assert_eq!(LElt::zeta().conj(), LElt::zeta_pow(6));
    assert!((0..3).all(|k| LElt::zeta().sigma_pow(k) != LElt::zeta_pow(6)));
}

#[test]
fn mu_relations() {
    let mu = KElt::mu();
    assert_eq!(mu.clone() * KElt::lambda_bar(), lam());
    assert_eq!(mu.clone() * KElt::mu_bar(), KElt::one());
    assert_eq!(KElt::mu_bar(), KElt::lambda_bar() / lam());
}

#[test]
fn embedding_examples() {
    let z = embed_complex(&LElt::zeta(), Place::InfiniteTheta).unwrap();
    assert!((z.re - 0.62349).abs() < 1e-5 && (z.im - 0.78183).abs() < 1e-5);
    assert!((z.norm() - 1.0).abs() < 1e-12);
    let l = embed_complex(&LElt::lambda(), Place::InfiniteEpsilon).unwrap();
    assert!((l.re + 0.5).abs() < 1e-12 && (l.im - 1.32288).abs() < 1e-5);
    // epsilon is the restriction of theta
    let lt = embed_complex(&LElt::lambda(), Place::InfiniteTheta).unwrap();
    assert!((l - lt).norm() < 1e-12);
    assert_eq!(embed_complex(&LElt::zeta(), Place::InfiniteEpsilon), Err(crate::Error::NotInK));
}

#[test]
fn valuation_examples() {
    let two = KElt::from_ints(2, 0);
    assert_eq!(valuation(&two, Place::Lambda), Ok(Valuation::Finite(1)));
    assert_eq!(valuation(&two, Place::LambdaBar), Ok(Valuation::Finite(1)));
    assert_eq!(valuation(&KElt::mu(), Place::Lambda), Ok(Valuation::Finite(1)));
    assert_eq!(valuation(&KElt::mu(), Place::LambdaBar), Ok(Valuation::Finite(-1)));
    assert_eq!(valuation(&KElt::zero(), Place::Lambda), Ok(Valuation::Infinity));
    assert_eq!(valuation(&lam(), Place::Lambda), Ok(Valuation::Finite(1)));
    assert_eq!(valuation(&lam(), Place::LambdaBar), Ok(Valuation::Finite(0)));
    assert_eq!(valuation(&KElt::sqrt_m7(), Place::Seven), Ok(Valuation::Finite(1)));
    assert_eq!(valuation(&KElt::from_ints(7, 0), Place::Seven), Ok(Valuation::Finite(2)));
    assert_eq!(valuation(&KElt::from_ints(9, 0), Place::Rational(3)), Ok(Valuation::Finite(2)));
    assert_eq!(valuation(&two, Place::Rational(11)), Err(crate::Error::SplitPrime(11)));
    assert_eq!(valuation(&two, Place::InfiniteTheta), Err(crate::Error::InfinitePlace));
}

#[test]
fn split_primes_match_brute_force() {
    for l in [3u64, 5, 11, 13, 17, 19, 23, 29, 37, 43] {
        let brute = (0..l).any(|x| (x * x + x + 2) % l == 0);
        assert_eq!(splits_in_k(l), brute, "l = {l}");
    }
}

#[test]
fn inverse_in_l() {
    let x = LElt::new([1, -2, 0, 3, 0, 1].map(|c| rat(c, 2)));
    assert_eq!(x.clone() * x.inverse().unwrap(), LElt::one());
    assert!(LElt::zero().inverse().is_none());
}

proptest! {
    #[test]
    fn ring_axioms_in_l(x in l_elt(), y in l_elt(), z in l_elt()) {
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        prop_assert_eq!(x.clone() * y.clone(), y * x);
    }

    #[test]
    fn automorphisms_are_ring_maps(x in l_elt(), y in l_elt(), a in 1i64..7) {
        prop_assert_eq!((x.clone() * y.clone()).automorphism(a), x.automorphism(a) * y.automorphism(a));
        prop_assert_eq!((x.clone() + y.clone()).automorphism(a), x.automorphism(a) + y.automorphism(a));
    }

    #[test]
    fn k_is_fixed_by_sigma(x in k_elt()) {
        let l: LElt = x.clone().into();
        prop_assert_eq!(l.sigma(), l.clone());
        prop_assert_eq!(l.as_quad(), Some(x.clone()));
        prop_assert_eq!(l.conj().as_quad(), Some(x.conj()));
    }

    #[test]
    fn k_injection_is_a_ring_map(x in k_elt(), y in k_elt()) {
        let lx: LElt = x.clone().into();
        let ly: LElt = y.clone().into();
        prop_assert_eq!(lx.clone() * ly.clone(), (x.clone() * y.clone()).into());
        prop_assert_eq!(lx + ly, (x + y).into());
    }

    #[test]
    fn theta_is_multiplicative(x in l_elt(), y in l_elt()) {
        let ex = embed_complex(&x, Place::InfiniteTheta).unwrap();
        let ey = embed_complex(&y, Place::InfiniteTheta).unwrap();
        let exy = embed_complex(&(x * y), Place::InfiniteTheta).unwrap();
        let scale = (ex * ey).norm().max(1.0);
        prop_assert!((exy - ex * ey).norm() <= 1e-9 * scale);
    }

    #[test]
    fn valuations_are_additive_and_ultrametric(x in k_elt(), y in k_elt()) {
        for place in [Place::Lambda, Place::LambdaBar, Place::Seven, Place::Rational(3), Place::Rational(5)] {
            let vx = valuation(&x, place).unwrap();
            let vy = valuation(&y, place).unwrap();
            prop_assert_eq!(valuation(&(x.clone() * y.clone()), place).unwrap(), vx + vy);
            prop_assert!(valuation(&(x.clone() + y.clone()), place).unwrap() >= vx.min(vy));
        }
    }

    #[test]
    fn norm_is_multiplicative(x in l_elt(), y in l_elt()) {
        prop_assert_eq!((x.clone() * y.clone()).norm_to_q(), x.norm_to_q() * y.norm_to_q());
    }
}

#[test]
fn norm_of_k_element_matches_field_norm() {
    let x = KElt::new(rat(3, 2), rat(-5, 3));
    let l: LElt = x.clone().into();
    // N_{L/Q} = N_{K/Q}^3
    let n: Rational = x.norm();
    assert_eq!(l.norm_to_q(), n.clone() * n.clone() * n);
}
