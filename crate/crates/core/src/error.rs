use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),
    #[error("mismatched ring parameters: {0}")]
    ParamMismatch(String),
    #[error("not invertible")]
    NotInvertible,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("enumeration budget exceeded: {what} needs {needed} > cap {cap}")]
    BudgetExceeded { what: String, needed: u128, cap: u64 },
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("interpolation failed: {0}")]
    Interpolation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HallError>;

/// Default cap on the size of any exhaustive enumeration.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

pub(crate) fn check_budget(what: impl FnOnce() -> String, needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        Err(HallError::BudgetExceeded { what: what(), needed, cap })
    } else {
        Ok(())
    }
}
