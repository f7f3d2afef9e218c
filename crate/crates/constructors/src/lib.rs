//! Closed-form factories for measured quantum groupoids: finite groupoids
//! (commutative and symmetric structures), weak Hopf C*-algebras with a Haar
//! solver and both conversion directions, pairs and quantum-space bundles,
//! and blockwise/tensor assembly of existing bundles.

pub mod groupoid;
pub mod ops;
pub mod pairs;
pub mod qspace;
pub mod weak_hopf;

pub use groupoid::{from_groupoid_commutative, from_groupoid_symmetric, FiniteGroupoid};
pub use ops::{direct_sum, tensor_product};
pub use pairs::pairs_quantum_groupoid;
pub use qspace::quantum_space_quantum_groupoid;
pub use weak_hopf::{check_wha_axioms, from_weak_hopf, solve_haar, to_weak_hopf, WeakHopfAlgebra};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConError {
    #[error(transparent)]
    Core(#[from] mva_core::MvaError),
    #[error(transparent)]
    Rel(#[from] rel_tensor::RelError),
    #[error(transparent)]
    Hopf(#[from] hopf_bimodule::HopfError),
    #[error(transparent)]
    Ant(#[from] antipode_engine::AntError),
    #[error("groupoid axiom violated: {0}")]
    Groupoid(String),
    #[error("weak Hopf axiom violated: {0} (residual {1:.3e})")]
    Axiom(&'static str, f64),
    #[error("Haar solver failed: {0}")]
    Haar(String),
    #[error("construction left its span: {0} (residual {1:.3e})")]
    SpanEscape(&'static str, f64),
}

pub type Result<T> = std::result::Result<T, ConError>;
