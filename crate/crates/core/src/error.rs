use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A graph or simulation specification violates its constraints.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    /// Inputs to an operation are inconsistent (sizes, ids, ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}
