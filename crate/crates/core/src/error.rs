use alloc::string::String;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input (unknown vertex, bad pattern, wrong length...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A brute-force routine or an enumeration would exceed its cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// The configuration space has no configurations.
    #[error("configuration space is empty")]
    EmptySpace,
    /// The requested fold does not satisfy the fold conditions.
    #[error("invalid fold: {0}")]
    InvalidFold(String),
    /// A construction produced something that failed its own verification.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::Error::InvalidInput(alloc::format!($($arg)*)) };
}
pub(crate) use invalid;
