//! The fundamental isometry of a measured quantum groupoid, its unitary
//! extension, and the pseudo-multiplicativity checks: pentagon, leg
//! commutations, coproduct implementation, generation, and the co-fixed
//! vector of the expectation case.

pub mod build;
pub mod checks;
pub mod pentagon;

pub use build::{build_w, build_w_prime, build_w_with_basis, PseudoMultiplicativeUnitary};
pub use checks::{
    check_cofixed_vector, check_commutations, check_coproduct_implemented, check_generation,
    check_slice_adjoint_rule, check_slice_identities, generation_rank,
};
pub use pentagon::check_pentagon;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FunError {
    #[error(transparent)]
    Core(#[from] mva_core::MvaError),
    #[error(transparent)]
    Rel(#[from] rel_tensor::RelError),
    #[error(transparent)]
    Hopf(#[from] hopf_bimodule::HopfError),
    #[error("fundamental isometry defect {0}; left invariance broken upstream")]
    IsometryDefect(f64),
    #[error("operation needs the {0} version of the unitary")]
    WrongVersion(&'static str),
}

pub type Result<T> = std::result::Result<T, FunError>;
