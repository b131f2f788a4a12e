use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("normalization: {0}")]
    Normalization(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("operator bounded: {0}")]
    OperatorBounded(String),
    #[error("capability: {0}")]
    Capability(String),
    #[error("norm not representable at truncation: {0}")]
    NotRepresentable(String),
}

impl Error {
    /// Capability-type failures map to a distinct CLI exit code.
    pub fn is_capability(&self) -> bool {
        matches!(self, Error::Capability(_) | Error::NotRepresentable(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
