//! The antipode of a measured quantum groupoid: the involutive antilinear
//! operator assembled from unitary slices, its polar decomposition, the
//! scaling group, the unitary antipode, and the identities they satisfy.

pub mod checks;
pub mod engine;

pub use checks::{
    check_antipode_properties, check_coproduct_slice_antipode, check_modular_exchange,
    check_slice_antipode_identity, check_strong_invariance,
};
pub use engine::{build_antipode, Antipode};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AntError {
    #[error(transparent)]
    Core(#[from] mva_core::MvaError),
    #[error(transparent)]
    Rel(#[from] rel_tensor::RelError),
    #[error(transparent)]
    Hopf(#[from] hopf_bimodule::HopfError),
    #[error(transparent)]
    Fun(#[from] fundamental_unitary::FunError),
    #[error("spanning family has rank {rank}, expected {dim}")]
    SpanDeficient { rank: usize, dim: usize },
    #[error("antilinear system inconsistent (residual {0}); invariance broken upstream")]
    Inconsistent(f64),
    #[error("modulus of the antipode is singular")]
    SingularModulus,
}

pub type Result<T> = std::result::Result<T, AntError>;
