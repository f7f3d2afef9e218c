//! Measured quantum groupoid bundles: Hopf-bimodule laws, invariant
//! operator-valued weights, adaptedness, and co-involutions, all checked as
//! numeric residuals on finite-dimensional realizations.

pub mod checks;
pub mod mqg;
pub mod ovw;
pub mod report;

pub use checks::{
    check_adapted, check_adapted_dual, check_all, check_bimodule, check_coinvolution,
    check_left_invariant, check_right_invariant,
};
pub use mqg::{Coinvolution, MeasuredQuantumGroupoid};
pub use ovw::OperatorValuedWeight;
pub use report::Report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HopfError {
    #[error(transparent)]
    Core(#[from] mva_core::MvaError),
    #[error(transparent)]
    Rel(#[from] rel_tensor::RelError),
    #[error("bundle data inconsistent: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, HopfError>;
