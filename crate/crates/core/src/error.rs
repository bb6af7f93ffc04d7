use thiserror::Error;

/// Errors raised by kernel, series and quadrature evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A summed term or kernel denominator came too close to a pole.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The truncation policy would need more terms than it allows.
    #[error("truncation policy exceeded: {0}")]
    Policy(String),

    /// Invalid configuration value (step sizes, tolerances, sample counts).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Malformed octonion literal.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
