use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::hermitian::{mult_matrix, similitude_factor};
use crate::LElt;

fn f(n: i64) -> F7 {
    F7::new(n)
}

fn integral_k<R: rand::Rng>(rng: &mut R) -> KElt {
    KElt::from_ints(rng.gen_range(-20..=20), rng.gen_range(-20..=20))
}

#[test]
fn reduction_examples() {
    // oracle: the unique x with 2x = -1 mod 7
    let half_minus_one = (0..7).find(|x| (2 * x + 1) % 7 == 0).unwrap();
    assert_eq!(reduce_mod_sqrt7(&KElt::lambda()).unwrap(), f(half_minus_one));
    assert_eq!(reduce_mod_sqrt7(&KElt::lambda()).unwrap(), f(3));
    assert_eq!(reduce_mod_sqrt7(&KElt::lambda_bar()).unwrap(), f(3));
    assert_eq!(reduce_mod_sqrt7(&KElt::sqrt_m7()).unwrap(), f(0));
    assert_eq!(reduce_mod_sqrt7(&KElt::new(crate::scalar::rat(1, 2), Rational::zero())).unwrap(), f(4));
    assert_eq!(reduce_mod_sqrt7(&KElt::new(crate::scalar::rat(1, 7), Rational::zero())), Err(Error::NotIntegralAtSeven));
    let hbar = reduce_mat_mod_sqrt7(&build_h()).unwrap();
    assert_eq!(hbar, FqMat::from_i64([[3; 3]; 3]));
    assert_eq!(hbar.rank(), 1);
    assert_eq!(reduce_mat_mod_sqrt7(&MatK::identity()).unwrap(), FqMat::identity());
}

#[test]
fn null_space() {
    let (basis, free) = null_basis();
    assert_eq!(basis, [[f(6), f(1), f(0)], [f(6), f(0), f(1)]]);
    assert_eq!(free, [1, 2]);
}

#[test]
fn varpi_examples() {
    assert_eq!(varpi(&MatK::identity()).unwrap(), Gl2::identity());
    for c in [2, 3, -1, 15] {
        let m = MatK::scalar(KElt::from_ints(c, 0));
        assert_eq!(varpi(&m).unwrap(), Gl2::scalar(f(c)));
    }
    let bad = MatK::diag([KElt::one(), KElt::one(), KElt::from_ints(2, 0)]);
    assert_eq!(varpi(&bad), Err(Error::NullSpaceNotPreserved));
}

#[test]
fn gl2_and_sylow_orders() {
    let all = Gl2::enumerate_gl2();
    assert_eq!(all.len(), 2016);
    let pm1 = det_pm1_subgroup();
    assert_eq!(pm1.len(), 672);
    // the 2-part of 672
    let two_part = 1usize << 672usize.trailing_zeros();
    let p = sylow2_p();
    assert_eq!(p.order(), two_part);
    assert_eq!(p.order(), 32);
    assert!(p.elements().iter().all(|g| matches!(g.det().value(), 1 | 6)));
    assert!(p.contains(&Gl2::scalar(f(-1))));
    for a in p.elements() {
        assert!(p.contains(&a.inverse().unwrap()));
        for b in p.elements() {
            assert!(p.contains(&(*a * *b)));
        }
    }
    assert_eq!(generated_subgroup(p.generators()), *p.elements());
    assert_eq!(p.times_scalars().len(), 96);
}

#[test]
fn sylow_subgroups_are_conjugate() {
    let p = sylow2_p();
    let mut distinct = 0;
    for seed in [1, 2, 3, 4] {
        let q = SylowP::construct(seed);
        assert_eq!(q.order(), 32);
        distinct += usize::from(q.elements() != p.elements());
        let g = p.conjugator_to(&q).expect("Sylow subgroups are conjugate");
        let gi = g.inverse().unwrap();
        let conj: BTreeSet<Gl2> = p.elements().iter().map(|x| g * *x * gi).collect();
        assert_eq!(&conj, q.elements());
    }
    assert!(distinct > 0, "randomized construction should not always land on the same subgroup");
}

#[test]
fn c7_membership() {
    let p = sylow2_p();
    assert!(in_c7(&MatK::identity(), &p).unwrap());
    let mut rng = sample::rng(9);
    for _ in 0..20 {
        let x = MatK::from_fn(|_, _| integral_k(&mut rng));
        for s in [1, -1] {
            let g = MatK::scalar(KElt::from_ints(s, 0)) + x.scale(&KElt::sqrt_m7());
            assert!(in_c7(&g, &p).unwrap());
        }
    }
    let zeta = mult_matrix(&LElt::zeta());
    let v = varpi(&zeta).unwrap();
    assert_eq!(v.order(), 7);
    assert!(!in_c7(&zeta, &p).unwrap());
}

#[test]
fn c7_is_closed_on_samples() {
    let p = sylow2_p();
    let mut rng = sample::rng(21);
    let members: Vec<MatK> = std::iter::repeat_with(|| sample::similitude(&mut rng, 6))
        .take(400)
        .filter(|g| in_c7(g, &p).unwrap())
        .take(12)
        .collect();
    assert!(members.len() >= 6, "too few samples in C7");
    for a in &members {
        assert!(in_c7(&a.inverse().unwrap(), &p).unwrap());
        for b in &members {
            assert!(in_c7(&(a * b), &p).unwrap());
        }
    }
}

#[test]
fn theta_examples() {
    assert_eq!(theta_of(&MatK::identity()).unwrap(), KElt::one());
    for c in [2, -3, 5] {
        let m = MatK::scalar(KElt::from_ints(c, 0));
        assert_eq!(theta_of(&m).unwrap(), KElt::from_ints(c, 0));
    }
    let not_sim = MatK::diag([KElt::one(), KElt::one(), KElt::from_ints(2, 0)]);
    assert_eq!(theta_of(&not_sim), Err(Error::NotSimilitude));
}

#[test]
fn theta_on_c7_is_plus_minus_one() {
    let p = sylow2_p();
    let mut rng = sample::rng(4);
    let mut seen = BTreeSet::new();
    for _ in 0..300 {
        let g = sample::similitude(&mut rng, 5);
        if in_c7(&g, &p).unwrap() {
            let t = reduce_mod_sqrt7(&theta_of(&g).unwrap()).unwrap();
            assert!(t == f(1) || t == f(-1), "theta = {t}");
            seen.insert(t);
        }
    }
    assert_eq!(seen.len(), 2);
}

#[test]
fn det_of_varpi_is_similitude_factor() {
    let mut rng = sample::rng(8);
    for _ in 0..30 {
        let g = sample::similitude(&mut rng, 4);
        let c = similitude_factor(&g).unwrap();
        assert_eq!(varpi(&g).unwrap().det(), reduce_mod_sqrt7(&c).unwrap());
    }
}

#[test]
fn components() {
    assert_eq!(component_count(), 3);
    assert_eq!(component_count_for(&F7::units().collect::<Vec<_>>()), 1);
    assert_eq!(component_count_for(&[f(2)]), 1);
    for level in [vec![], vec![f(2)], vec![f(3)], vec![f(6)]] {
        assert_eq!(6 % component_count_for(&level), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_ring_hom(s in any::<u64>()) {
        let mut rng = sample::rng(s);
        let x = integral_k(&mut rng);
        let y = integral_k(&mut rng);
        let rx = reduce_mod_sqrt7(&x).unwrap();
        let ry = reduce_mod_sqrt7(&y).unwrap();
        prop_assert_eq!(reduce_mod_sqrt7(&(x.clone() + y.clone())).unwrap(), rx + ry);
        prop_assert_eq!(reduce_mod_sqrt7(&(x * y)).unwrap(), rx * ry);
    }

    #[test]
    fn varpi_and_theta_are_multiplicative(s in any::<u64>()) {
        let mut rng = sample::rng(s);
        let a = sample::similitude(&mut rng, 4);
        let b = sample::similitude(&mut rng, 4);
        prop_assert_eq!(varpi(&(&a * &b)).unwrap(), varpi(&a).unwrap() * varpi(&b).unwrap());
        prop_assert_eq!(theta_of(&(&a * &b)).unwrap(), theta_of(&a).unwrap() * theta_of(&b).unwrap());
    }
}
