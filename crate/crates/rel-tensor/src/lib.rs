//! Relative tensor products over a finite-dimensional basis algebra N.
//!
//! A leg is a Hilbert space with a (anti-)representation of N; the relative
//! tensor product is realized constructively as the Gram quotient of the
//! ordinary tensor product, with classes and representatives exposed so that
//! flips, associators and pseudo-multiplicative unitaries can be transported
//! between composite spaces.

pub mod basis;
pub mod class;
pub mod rel;
pub mod slice;

pub use basis::{BasisRep, BoundedVectorOp, RelBasis};
pub use class::ClassSpace;
pub use rel::{fiber_product, LinkKind, RelativeTensorSpace};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RelError {
    #[error(transparent)]
    Core(#[from] mva_core::MvaError),
    #[error("(anti-)representation law violated: residual {0:.3e}")]
    BadRep(f64),
    #[error("bracket value escapes the basis algebra: residual {0:.3e}")]
    BracketEscape(f64),
    #[error("Gram operator has negative eigenvalue {0:.3e}")]
    GramNegative(f64),
    #[error("operator outside the commutant required by op_tensor: commutator norm {0:.3e}")]
    NotModular(f64),
    #[error("basis construction failed to exhaust the identity (defect {0:.3e})")]
    BasisDefect(f64),
    #[error("dimension mismatch in {0}")]
    Mismatch(&'static str),
}

pub type Result<T> = std::result::Result<T, RelError>;
