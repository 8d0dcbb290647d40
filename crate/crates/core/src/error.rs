use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape {shape:?} does not multiply to the vector length {len}")]
    BadShape { shape: Vec<usize>, len: usize },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("zero vector cannot be normalized: {0}")]
    ZeroVector(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Fock truncation leaks {leak:.3e} of the norm at cutoff {cutoff} (limit {limit:.0e})")]
    TruncationTail {
        leak: f64,
        cutoff: usize,
        limit: f64,
    },

    #[error("operator is not dichotomic: {0}")]
    NotDichotomic(String),

    #[error("malformed pairing scheme: {0}")]
    MalformedScheme(String),

    #[error("state must be bipartite, shape is {0:?}")]
    NotBipartite(Vec<usize>),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("invalid unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
