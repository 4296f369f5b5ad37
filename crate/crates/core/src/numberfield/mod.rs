//! Exact arithmetic in `L = Q(zeta_7)` and its subfield `K = Q(sqrt(-7))`.

mod cyclo;
mod place;
mod quad;

pub use cyclo::CycloElt;
pub use place::{
    embed_complex, embed_k, epsilon_lambda, is_unit_above, splits_in_k, valuation, Place,
    Valuation,
};
pub(crate) use place::is_prime;

#[cfg(test)]
mod tests;
pub use quad::QuadElt;
