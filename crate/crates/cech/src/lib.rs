//! Čech hypercohomology on the cover of a toric variety by its maximal-cone
//! charts, one character at a time.
//!
//! Cochains live on strictly increasing chart tuples in the input order of
//! the maximal cones. A block `(σ₀<…<σ_r, s)` of total degree `r + s` holds
//! the weight-`m` slice of a sheaf on the overlap. The total differential is
//! `D = δ + (−1)^r d`.

mod assemble;
mod cochain;
mod hyper;

pub use assemble::{chart_tuples, Block, Class, WeightComplex};
pub use cochain::{cup, total_differential, CechCochain};
pub use hyper::{
    cochain_in_level, de_rham_complex, higgs_complex, higgs_hypercohomology, hypercohomology, sheaf_cohomology, support, support_with,
    total_hypercohomology, Atlas, FilteredWeightComplex, HyperCohomology, Selector,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CechError {
    #[error("cochain of degree {degree} at character {weight:?} is not a cocycle")]
    NotACocycle { degree: usize, weight: Vec<i64> },
    #[error("entry on charts {tuple:?} in form degree {form_degree} is not a section at character {weight:?}")]
    NotASection { tuple: Vec<usize>, form_degree: usize, weight: Vec<i64> },
    #[error("entry on charts {tuple:?} in form degree {form_degree} does not have total degree {degree}")]
    DegreeMismatch { tuple: Vec<usize>, form_degree: usize, degree: usize },
    #[error(transparent)]
    Geometry(#[from] toricgeom::GeomError),
}
