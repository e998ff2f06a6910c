use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid distance order: {0}")]
    InvalidOrder(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("costs from different regimes cannot be combined: {0}")]
    IncompatibleCosts(String),
    #[error("{what} exceeds cap ({size} > {cap})")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    /// The source instance has no solution for structural reasons, so no
    /// target instance is built.
    #[error("vacuous instance: {0}")]
    Vacuous(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("linear program is {0}")]
    Lp(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
