use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation produced a non-finite or otherwise unusable value.
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// An optimizer ran off toward an unbounded objective.
    #[error("{what} diverged; best iterate x = {best_x}, f = {best_f}")]
    Divergence {
        what: String,
        best_x: f64,
        best_f: f64,
    },

    /// The proposal failed to dominate the target at `x`.
    #[error("envelope violated at x = {x}: log f0 - log h0 = {log_ratio}")]
    EnvelopeViolation { x: f64, log_ratio: f64 },

    /// An iteration or proposal budget ran out.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Input that is structurally valid but carries no information.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
