use thiserror::Error;

pub type Result<T, E = GroupError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("{what} {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("{0} does not fit in 128 bits")]
    OrderOverflow(&'static str),

    #[error("group of order {order} is not a {prime}-group")]
    NotPGroup { order: u128, prime: u64 },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("operation requires a nontrivial group")]
    TrivialGroup,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid certificate: {0}")]
    InvalidCert(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("census: {0}")]
    Census(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for GroupError {
    fn from(e: std::io::Error) -> Self {
        GroupError::Io(e.to_string())
    }
}
