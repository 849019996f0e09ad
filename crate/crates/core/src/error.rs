use thiserror::Error;

/// Coarse classification used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A mathematical check failed (nonzero residual, pole, non-closed subspace).
    Check,
    /// Malformed or inconsistent input (syntax, schema, dimensions).
    Input,
    /// The computation falls outside what the toolkit supports.
    Unsupported,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at {var} = {value}: denominator {factor} vanishes")]
    Pole { var: String, value: String, factor: String },

    #[error("{entry} has valuation {valuation} at t = 0")]
    PoleAtZero { entry: String, valuation: i64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("parameter mismatch: {0}")]
    Parameters(String),

    #[error("{0}")]
    Check(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Pole { .. } | Error::PoleAtZero { .. } | Error::Singular | Error::Check(_) => {
                ErrorKind::Check
            }
            Error::Unsupported(_) => ErrorKind::Unsupported,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
