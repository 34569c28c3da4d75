//! Log Frobenius lifts to `Z/p²` on toric charts and the explicit splitting
//! they induce.
//!
//! A lift is stored as its mod-`p` perturbation on each chart coordinate:
//! `F̃(t) = t^p(1 + p·u)` along rays of `D` and `F̃(t) = t^p + p·λ` elsewhere.
//! Both give `F̃*(x^m) = x^{pm}(1 + p·G_α(m))` with `G_α` linear in `m`, from
//! which `ζ_α`, `h_αβ`, `φ` and the homotopies `η` are read off.

mod cup;
mod homotopy;
mod lift;
mod phi;
mod psi;
mod split;

pub use homotopy::{homotopy_eta, pull_back_form, EtaCertificate};
pub use lift::{validate_lift, FrobLift, LiftReport};
pub use psi::{higgs_basis, psi_block, psi_chain_map, psi_on_cohomology, PsiBlock};
pub use split::{SplitData, SplitLawReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("perturbation on chart {chart}, ray {ray} has monomial {weight:?} outside the dual cone")]
    NotRegular { chart: usize, ray: usize, weight: Vec<i64> },
    #[error("ray {ray} is not a coordinate of chart {chart}")]
    NotInChart { chart: usize, ray: usize },
    #[error("perturbation on chart {chart}, ray {ray} is not a function")]
    NotAFunction { chart: usize, ray: usize },
    #[error("lift covers {got} charts, fan has {want}")]
    ChartCount { got: usize, want: usize },
    #[error("form degree {degree} needs {degree}! invertible, but p = {p}")]
    DegreeTooHigh { degree: usize, p: u32 },
    #[error("ψ in degree {degree} at character {weight:?} is {rows}x{cols} of rank {rank}")]
    NotInvertible { degree: usize, weight: Vec<i64>, rows: usize, cols: usize, rank: usize },
    #[error("φ of a degree-{degree} class has a nonzero class at character {weight:?}")]
    ClassLeak { degree: usize, weight: Vec<i64> },
    #[error("homotopy identity fails for basis section {section:?} on charts {tuple:?}")]
    HomotopyMismatch { section: Vec<usize>, tuple: Vec<usize> },
    #[error("homotopy of a W_{level} section over target chart {chart} leaves W_{level}")]
    NotFiltered { chart: usize, level: usize },
    #[error(transparent)]
    Geometry(#[from] toricgeom::GeomError),
    #[error(transparent)]
    Cech(#[from] cech::CechError),
}
