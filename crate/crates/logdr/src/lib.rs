//! Log de Rham calculus in character-graded normal form.
//!
//! A monomial form is `c · x^m ⊗ e_J` with `e_J` a basis wedge of
//! `Λ(M ⊗ F_p)`; `x^m ⊗ v` stands for `x^m · dlog x^v`. The differential is
//! `d(x^m ⊗ w) = x^m ⊗ (m̄ ∧ w)`.

mod filtrations;
mod formsum;
mod residue;
mod truncation;

pub use filtrations::{hodge_subspace, weight_subspace};
pub use formsum::{d, FormSum, MonomialLogForm};
pub use residue::{gr_weight_decompose, residue, residue_target, weight_residue, GrDecomposition};
pub use truncation::{local_de_rham, truncate, truncation_mu_check, two_sided_mu, LocalDeRham, MuReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogError {
    #[error("form is not in weight level W_{level} (character {weight:?})")]
    NotInWeightLevel { level: usize, weight: Vec<i64> },
    #[error("rays {0:?} do not form a face of the fan inside D")]
    BadFace(Vec<usize>),
    #[error("residue decomposition failed at character {weight:?}, degree {degree}, level {level}: {detail}")]
    DecompositionFailure { weight: Vec<i64>, degree: usize, level: usize, detail: String },
}
