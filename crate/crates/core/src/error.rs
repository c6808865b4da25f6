use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear solve or eigenvalue iteration broke down.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("no neutral threshold at a^2 = {a_sq}, N = {n_rate}: no positive real eigenvalue")]
    NoNeutralThreshold { a_sq: f64, n_rate: f64 },

    /// The coarse scan did not find an interior minimum of Ra(a).
    #[error("no interior minimum in [{lo}, {hi}]; scan trace: {trace}")]
    NoInteriorMinimum { lo: f64, hi: f64, trace: String },

    #[error("unknown method tag `{0}`")]
    UnknownMethod(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
