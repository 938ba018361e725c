use alloc::string::String;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A configuration value is invalid (wrong dataset id, n too small,
    /// bad probability bounds, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// Numeric input violates a precondition (non-finite entries, length
    /// mismatch, probabilities outside (0, 1)).
    #[error("input error: {0}")]
    Input(String),
    /// A fit could not be carried out (rank-deficient design without
    /// usable fallback, degenerate modulation function).
    #[error("fit error: {0}")]
    Fit(String),
    /// An experiment produced no usable replications.
    #[error("experiment error: {0}")]
    Experiment(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn fit(msg: impl Into<String>) -> Self {
        Error::Fit(msg.into())
    }
}
