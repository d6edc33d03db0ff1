use thiserror::Error;

/// Failure modes shared by every module.
///
/// The three families map onto the command-line exit codes: usage errors are
/// caller mistakes, capacity and budget errors mean the input was valid but
/// too large for the configured resources.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("capacity exceeded: coefficient {coefficient} exceeds the limit {limit}")]
    Capacity { coefficient: u64, limit: u64 },

    #[error("budget exceeded in {what} after {spent} steps")]
    Budget { what: &'static str, spent: u64 },

    #[error("covering radius bracket [{lo}, {hi}] did not reach tolerance within {cells} cells")]
    CoverBudget { lo: f64, hi: f64, cells: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// True for the resource-limit family (capacity, budget, overflow).
    pub fn is_resource_limit(&self) -> bool {
        !matches!(self, Error::Usage(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
