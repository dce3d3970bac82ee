use thiserror::Error;

/// Errors shared by the numerical and state-sum layers.
///
/// Parse errors carry their own type ([`crate::tangle::ParseError`]) because
/// they need line/column payloads; everything else lands here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("label {value} outside [0, {max}]")]
    LabelOutOfRange { value: i64, max: i64 },
    #[error("constraint system is inconsistent: {0}")]
    InconsistentConstraints(String),
    #[error("magnitude overflow: partial product exceeded log-magnitude {0}")]
    Overflow(f64),
    #[error("unknown builtin diagram {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Parse(#[from] crate::tangle::ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
