//! Seeded random elements for property checks and the verification report.

use rand::Rng;
use rand::SeedableRng;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;

use crate::algebra::DivElt;
use crate::matrix::Mat3;
use crate::scalar::rat;
use crate::{DElt, KElt, LElt, MatK, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with small numerator and denominator.
pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn k_elt<R: Rng>(rng: &mut R) -> KElt {
    KElt::new(rational(rng), rational(rng))
}

pub fn l_elt<R: Rng>(rng: &mut R) -> LElt {
    LElt::new(std::array::from_fn(|_| rational(rng)))
}

pub fn d_elt<R: Rng>(rng: &mut R) -> DElt {
    DivElt::new([l_elt(rng), l_elt(rng), l_elt(rng)])
}

pub fn nonzero_d_elt<R: Rng>(rng: &mut R) -> DElt {
    loop {
        let x = d_elt(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn mat_k<R: Rng>(rng: &mut R) -> MatK {
    Mat3::from_fn(|_, _| k_elt(rng))
}

/// A random matrix over `K` with nonzero determinant.
pub fn invertible_mat_k<R: Rng>(rng: &mut R) -> MatK {
    loop {
        let m = mat_k(rng);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Generators of a group of integral similitudes of `H`: multiplication by
/// `zeta`, `lambda` and `bar(lambda)`, the Galois generator `sigma`, and `-1`.
pub fn similitude_generators() -> Vec<MatK> {
    use crate::hermitian::{mult_matrix, sigma_matrix};
    vec![
        mult_matrix(&LElt::zeta()),
        mult_matrix(&KElt::lambda().into()),
        mult_matrix(&KElt::lambda_bar().into()),
        sigma_matrix(),
        -MatK::identity(),
    ]
}

/// A random word of length `len` in [`similitude_generators`].
pub fn similitude<R: Rng>(rng: &mut R, len: usize) -> MatK {
    let gens = similitude_generators();
    (0..len).fold(MatK::identity(), |acc, _| &acc * &gens[rng.gen_range(0..gens.len())])
}
