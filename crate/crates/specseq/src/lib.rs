//! Spectral sequences of filtered complexes over `F_p`.
//!
//! Pages use decreasing indexing: an increasing filtration `W` is read as
//! `W̃^p = W_{−p}`, so the weight spectral sequence lives at spots `(−l, n+l)`.

mod filtered;
mod filtrations;
mod mflc;
mod pages;

pub use filtered::{gr_fil, Along, FilteredComplexFp, GradedPiece};
pub use filtrations::{strictness_check, three_filtrations, SpotFiltrations, Strictness, ThreeFiltrations};
pub use mflc::{
    fl_structure_on_h, mfl_pages, page_fl_morphisms, weight_subobjects, MFLComplex, MflPages, PageFacts,
};
pub use pages::{pages, Page, SpectralSequence, Spot};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("invalid filtered complex: {0}")]
    Invalid(String),
    #[error("MFLC axiom fails ({axiom}) in degree {degree}")]
    AxiomViolation { axiom: String, degree: i64 },
    #[error("Hodge spectral sequence does not degenerate at E₁ in degree {degree}")]
    NoDegeneration { degree: i64 },
    #[error(transparent)]
    Fl(#[from] flmod::FlError),
}
