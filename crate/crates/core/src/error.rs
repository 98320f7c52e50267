use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid window [{lo}, {hi}]: need 1 <= lo <= hi")]
    InvalidWindow { lo: u64, hi: u64 },
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("{0} lies outside the window")]
    OutsideWindow(String),
    #[error("chain is not decreasing: level {level} is not a subset of level {prev}")]
    NotDecreasing { level: usize, prev: usize },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("transfer self-check failed: {0}")]
    TransferFault(String),
    #[error("digest mismatch: {0}")]
    DigestMismatch(String),
    #[error("unknown certificate kind `{0}`")]
    UnknownKind(String),
    #[error("malformed certificate payload: {0}")]
    MalformedPayload(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
