//! Toric front-end.
//!
//! A smooth complete fan gives the variety `X`, its affine charts `U_σ` for
//! maximal cones `σ`, and their overlaps `U_τ` for common faces `τ`. A
//! subset of rays gives the boundary divisor `D`. Forms are described per
//! character `m ∈ M` as subspaces of `Λ^i(M ⊗ F_p)`.

mod fan;
mod forms;
mod morphism;
mod support;

pub use fan::{dual_basis, validate, DivisorSet, Fan, Twist, ValidityReport};
pub use forms::{form_space, form_space_conditions, kernel_of_contractions, Context, SliceConditions};
pub use morphism::ToricMorphism;
pub use support::{default_radius, shell_points, weight_box, weight_support, WeightBox};

use thiserror::Error;

/// A character `m ∈ M ≅ Z^n`.
pub type Character = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("ray {index} {ray:?} is not a primitive nonzero vector")]
    NotPrimitive { index: usize, ray: Vec<i64> },
    #[error("ray {index} has {got} coordinates, lattice rank is {rank}")]
    BadRayLength { index: usize, got: usize, rank: usize },
    #[error("cone {cone} references ray {ray}, which does not exist")]
    BadRayIndex { cone: usize, ray: usize },
    #[error("cone {cone} is not smooth: determinant {det}")]
    NotSmooth { cone: usize, det: i64 },
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("divisor ray {0} does not exist")]
    BadDivisorRay(usize),
    #[error("twist has {got} coefficients, fan has {rays} rays")]
    BadTwist { got: usize, rays: usize },
    #[error("weight radius {radius} too small: character {witness:?} in the outer shell carries cohomology")]
    RadiusTooSmall { radius: i64, witness: Character },
    #[error("no chart assignment: source cone {0} maps into no target cone")]
    NoChartAssignment(usize),
    #[error("divisors incompatible: source ray {src_ray} lies on target divisor ray {dst_ray} but not in the source divisor")]
    DivisorIncompatible { src_ray: usize, dst_ray: usize },
    #[error("lattice map has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    BadLatticeMap { rows: usize, cols: usize, want_rows: usize, want_cols: usize },
}

/// Pairing `⟨m, v⟩`.
pub fn pair(m: &[i64], v: &[i64]) -> i64 {
    m.iter().zip(v).map(|(a, b)| a * b).sum()
}
