use thiserror::Error;

/// Library-wide error type. The variants mirror the failure families of the
/// public operations: malformed shapes, bad symbols, inputs outside an
/// operation's domain, and blown resource limits.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions or structure of an input are inconsistent.
    #[error("structural error: {0}")]
    Structural(String),

    /// An entry or character is outside the allowed alphabet.
    #[error("encoding error: {0}")]
    Encoding(String),

    /// The input is well-formed but outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size or search limit was exceeded.
    #[error("resource error: {0}")]
    Resource(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
