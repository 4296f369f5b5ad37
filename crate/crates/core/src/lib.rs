//! Exact arithmetic for the cyclic division algebra over `Q(sqrt(-7))`, the
//! hermitian lattice behind Mumford's fake projective plane, its level
//! structure at 7, and the action of Mumford's lattice on the Bruhat-Tits
//! building of `PGL3(Q2)`.
//!
//! The arithmetic is generic over the coefficient type (see [`scalar`]); the
//! aliases below fix the choices used throughout the verification code.

pub mod algebra;
pub mod building;
pub mod error;
pub mod hermitian;
pub mod lattice_group;
pub mod levels;
pub mod matrix;
pub mod numberfield;
pub mod padic;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};

use num_rational::BigRational;

/// Exact rationals.
pub type Rational = BigRational;
/// Element of `L = Q(zeta_7)`.
pub type LElt = numberfield::CycloElt<Rational>;
/// Element of `K = Q(sqrt(-7))`.
pub type KElt = numberfield::QuadElt<Rational>;
/// Element of `O_K = Z[lambda]` with machine-integer coordinates.
pub type OkElt = numberfield::QuadElt<i64>;
/// 3x3 matrix over `K`.
pub type MatK = matrix::Mat3<KElt>;
/// 3x3 matrix over `L`.
pub type MatL = matrix::Mat3<LElt>;
/// 3x3 matrix over `O_K`.
pub type MatOk = matrix::Mat3<OkElt>;
/// Element of the division algebra `D`.
pub type DElt = algebra::DivElt<Rational>;
