//! Modulus and scaling data of a measured quantum groupoid.
//!
//! The Connes cocycle of Φ∘R against Φ factors as λ^{it²/2} δ^{it} with a
//! central scaling operator λ and a modulus δ commuting with both base
//! embeddings; both are recovered here by principal-log extraction from the
//! cocycle at a small step.  On top of them the crate verifies uniqueness of
//! adapted invariant weights up to a central element of the basis, builds the
//! manageable operator P implementing the scaling group on GNS vectors,
//! checks the manageability relation and weak regularity of the fundamental
//! unitary, and implements the change-of-base-weight theorem.

pub mod manageable;
pub mod modulus;
pub mod rebase;
pub mod uniqueness;

pub use manageable::{
    build_p, check_manageability, check_weak_regularity, ManageableOp, WeakRegularity,
};
pub use modulus::{check_modulus_relations, extract_modulus, weight_through, ModulusData};
pub use rebase::{rebase_weight, RebaseOutcome};
pub use uniqueness::{check_right_weight_uniqueness, check_uniqueness, UniquenessOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScaError {
    #[error(transparent)]
    Core(#[from] mva_core::MvaError),
    #[error(transparent)]
    Rel(#[from] rel_tensor::RelError),
    #[error(transparent)]
    Hopf(#[from] hopf_bimodule::HopfError),
    #[error(transparent)]
    Fun(#[from] fundamental_unitary::FunError),
    #[error(transparent)]
    Ant(#[from] antipode_engine::AntError),
    #[error("cocycle spectrum violates the branch guard after {0} halvings of the step")]
    BranchCut(usize),
    #[error("extracted scaling operator is not central: residual {0:.3e}")]
    NotCentral(f64),
    #[error("perturbation pair does not commute: residual {0:.3e}")]
    NonCommuting(f64),
    #[error("element is not strictly positive (min eigenvalue {0:.3e})")]
    NotPositive(f64),
}

pub type Result<T> = std::result::Result<T, ScaError>;
