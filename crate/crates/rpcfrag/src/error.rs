//! Error taxonomy shared by the whole crate.

/// Failure classes surfaced by constructors, laws, samplers and engines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Blocks that are empty, overlapping, or not covering the ground set.
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    /// A structurally valid input that violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Parameters outside the admissible domain of a law.
    #[error("domain: {0}")]
    Domain(String),
    /// Engine or sampler configuration that cannot be honored.
    #[error("configuration: {0}")]
    Config(String),
    /// Loss of numeric integrity (non-finite values, failed convergence).
    #[error("numeric: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
