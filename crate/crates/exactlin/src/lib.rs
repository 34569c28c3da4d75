//! Exact linear algebra over a prime field `F_p`.
//!
//! The prime is carried by a [`PrimeField`] context value that every
//! operation receives explicitly; scalars are plain residues. All bases are
//! kept in reduced row echelon form so results are canonical and
//! byte-deterministic.

mod complex;
mod exterior;
mod field;
mod flag;
mod matrix;
mod subspace;
mod zpsq;

pub use complex::{induced_on_cohomology, Complex};
pub use exterior::{
    bits, contraction_matrix, determinant, exterior_power, left_wedge_matrix, wedge_sign,
    ExteriorBasis,
};
pub use field::{FpScalar, PrimeField};
pub use flag::{solve, Direction, Flag, StrictnessWitness};
pub use matrix::Matrix;
pub use subspace::{rank_kernel_image, subquotient_map, Quotient, Subspace};
pub use zpsq::{ZpSqRing, ZpSqScalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("map is not compatible with the subquotient pairs: {0}")]
    NotCompatible(String),
    #[error("flag is not monotone at step {0}")]
    NotMonotone(usize),
}
