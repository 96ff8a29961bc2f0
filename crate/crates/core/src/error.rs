use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field size {size} exceeds the cap {cap}")]
    FieldCapExceeded { size: u64, cap: u64 },
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element is not in an extension tower over the given base field")]
    NotInTower,
    #[error("operation needs a second operand")]
    MissingOperand,
    #[error("{what} count {count} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, count: u128, cap: u128 },
    #[error("subspaces live in different ambient spaces")]
    MixedAmbient,
    #[error("vectors live over different geometries")]
    MixedGeometry,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("subspaces are not skew")]
    NotSkew,
    #[error("vector is not a member of {0}")]
    NotInCode(String),
    #[error("hull computed by intersection disagrees with the c.1 = 0 description")]
    HullMismatch,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// True for the cap-exceedance family of errors.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::FieldCapExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
