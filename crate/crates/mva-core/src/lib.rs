//! Finite-dimensional von Neumann algebra kernel.
//!
//! Everything is a finite direct sum of complex matrix blocks.  Weights are
//! densities against the non-normalized block trace, GNS spaces are
//! Hilbert-Schmidt realizations, and modular data (Delta, J, sigma_t) comes in
//! closed form from the density.

pub mod algebra;
pub mod gns;
pub mod mat;
pub mod weight;

pub use algebra::{AlgebraPresentation, MultiMatrixAlgebra};
pub use gns::Gns;
pub use mat::{CMat, CVec, C};
pub use weight::Weight;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MvaError {
    #[error("matrix is not {0} within tolerance (residual {1:.3e})")]
    NotOfKind(&'static str, f64),
    #[error("branch cut violation: eigenvalue argument {0:.6} too close to the negative real axis")]
    BranchCut(f64),
    #[error("singular matrix in {0} (smallest relevant magnitude {1:.3e})")]
    Singular(&'static str, f64),
    #[error("linear solve rank-deficient beyond tolerance in {0}")]
    RankDeficient(&'static str),
    #[error("algebra membership violated in {0}: residual {1:.3e}")]
    Membership(&'static str, f64),
    #[error("structure recovery failed: {0}")]
    Structure(String),
    #[error("mismatched algebras or dimensions in {0}")]
    Mismatch(&'static str),
}

pub type Result<T> = std::result::Result<T, MvaError>;
