use thiserror::Error;

/// Errors raised by the transforms, quadrature rules and file formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Rule sizes, truncations or work buffers are too small for the request.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// An integrand produced a non-finite value at a quadrature node.
    #[error("evaluation failure at node {node}: {detail}")]
    Evaluation { node: usize, detail: String },

    /// The integral form of an operator does not exist at these parameters.
    #[error("integral representation unavailable: {0}")]
    RepresentationUnavailable(String),

    /// Malformed input file.
    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
