use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported ring for {op}: {ring}")]
    UnsupportedRing { op: &'static str, ring: String },
    #[error("quotient not representable: {0}")]
    UnsupportedQuotient(String),
    #[error("objects live over different rings: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("matrix is not idempotent over {0}")]
    NotIdempotent(String),
    #[error("mod-I homology vanishes; nothing to descend")]
    ZeroInput,
    #[error("support on V(I) could not be verified: {0}")]
    SupportNotVerified(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn unsupported(op: &'static str, ring: impl std::fmt::Display) -> Self {
        Error::UnsupportedRing { op, ring: ring.to_string() }
    }
}
