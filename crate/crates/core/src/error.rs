use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("empty stratum: {0}")]
    EmptyStratum(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("unknown volume for {0}")]
    UnknownVolume(String),
    #[error("volume for {0} is approximate and cannot enter an exact computation")]
    InexactVolume(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("database error: {0}")]
    Database(String),
}

pub type Result<T> = std::result::Result<T, Error>;
