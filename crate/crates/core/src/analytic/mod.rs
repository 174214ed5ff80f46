//! The ternary lattice sum `A_d` and the per-field existence classifier
//! for nontrivial progressions of three cubes.

use num_bigint::BigInt;
use thiserror::Error;

use crate::elliptic::EllipticError;
use crate::progression::ProgressionError;

mod classify;
mod lattice;

pub use classify::{classify, upgrade_with_witness, Criterion, CriterionMatch, Status, Verdict, Witness, CLASSIFY_LATTICE_LIMIT};
pub use lattice::{a_d, a_d_solutions, quartic_minus3_has_root, ADResult, LATTICE_LIMIT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticError {
    #[error("{0} must be positive")]
    NonPositive(BigInt),
    #[error("{value} is not squarefree (squarefree core {core})")]
    NotSquarefree { value: BigInt, core: BigInt },
    #[error("{0} is not coprime to 6")]
    NotCoprimeToSix(BigInt),
    #[error("{value} exceeds the enumeration limit {limit}")]
    TooLarge { value: BigInt, limit: u64 },
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("D must be nonzero")]
    Zero,
    #[error("witness point has finite order {0}")]
    FiniteOrder(u32),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Progression(#[from] ProgressionError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

impl AnalyticError {
    /// Whether the error points at a bug rather than at bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, AnalyticError::Inconsistent(_))
    }
}
