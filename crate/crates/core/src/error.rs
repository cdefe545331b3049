use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: loop on vertex {vertex}")]
    Loop { line: usize, vertex: u32 },

    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    Range { line: usize, vertex: u32, n: usize },

    #[error("unknown pattern `{0}` (supported: K<k>, C<k>, P<k>, S<k>, e.g. K3, C5, P3, S4)")]
    UnknownPattern(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("cannot split class {class} of size {size} into {factor} parts")]
    Refinement { class: usize, size: usize, factor: usize },

    #[error("copy enumeration exceeded the cap of {cap} copies")]
    CapExceeded { cap: usize },

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("{stage}: {message}")]
    Stage { stage: &'static str, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(message: impl Into<String>) -> Self {
        Error::Argument(message.into())
    }

    pub(crate) fn stage(stage: &'static str, source: Error) -> Self {
        match source {
            // Keep cap and budget failures distinguishable for exit-code mapping.
            Error::CapExceeded { .. } | Error::Budget(_) => source,
            Error::Stage { .. } => source,
            other => Error::Stage { stage, message: other.to_string() },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
