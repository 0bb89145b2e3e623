use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Generator would exceed the configured vertex cap.
    #[error("graph needs {requested} vertices, above the cap of {cap}")]
    SizeCap { requested: u128, cap: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// An operation would read geometry distorted by the truncation boundary.
    #[error("radius {radius} exceeds the unclipped region (limit {limit})")]
    Truncation { radius: usize, limit: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Weights were sampled on a different graph than the one queried.
    #[error("provenance mismatch: weights belong to graph {found}, expected {expected}")]
    Provenance { expected: String, found: String },

    #[error("configuration error: {0}")]
    Config(String),

    /// Deleting the neighborhood of the middle third would also delete an endpoint.
    #[error("deletion radius {radius} removes a segment endpoint (cap {cap})")]
    EndpointCap { radius: f64, cap: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Short machine-readable tag used in structured trial errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeCap { .. } => "size_cap",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::Domain(_) => "domain",
            Error::Truncation { .. } => "truncation",
            Error::Precondition(_) => "precondition",
            Error::Degenerate(_) => "degenerate",
            Error::Provenance { .. } => "provenance",
            Error::Config(_) => "config",
            Error::EndpointCap { .. } => "endpoint_cap",
            Error::Parse { .. } => "parse",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
