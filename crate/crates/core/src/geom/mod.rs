//! Geometric realization of the Virasoro generators as differential
//! operators on polynomials in the coefficients `a_m`, `abar_m` of a
//! univalent map, and the states they generate from `1`.

pub mod build;
pub mod cache;
pub mod checks;
pub mod operator;
pub mod solver;
pub mod states;

use thiserror::Error;

use crate::series::SeriesError;

pub use build::{Construction, OperatorTable, TableEntry};
pub use operator::{DiffOperator, Family, State};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("operator of mode {mode} is known up to index {available}, index {needed} required")]
    InsufficientIndex {
        mode: i32,
        needed: u32,
        available: u32,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("construction failed: {0}")]
    Build(String),
}
