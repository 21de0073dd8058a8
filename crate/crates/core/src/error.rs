use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("alphabet orders differ (q={left} vs q={right})")]
    AlphabetMismatch { left: u32, right: u32 },

    #[error("empty sequence")]
    EmptySequence,

    #[error("alphabet order must be at least 1, got {0}")]
    InvalidAlphabet(u32),

    #[error("phase {phase} is outside Z_{q}")]
    PhaseOutOfRange { phase: u32, q: u32 },

    #[error("root of unity exp(2*pi*i*{exponent}/{order}) is not in the alphabet of order {q}")]
    NotInAlphabet { order: u32, exponent: u32, q: u32 },

    #[error("negation is not representable over an odd alphabet (q={0})")]
    OddAlphabet(u32),

    #[error("values of q={q} are not exactly representable in this scalar type")]
    NotRepresentable { q: u32 },

    #[error("operation requires a binary sequence pair (got q={0})")]
    NotBinary(u32),

    #[error("binary cross Z-complementary pairs have even length (got N={0})")]
    OddLength(usize),

    #[error("seed pair is not a Golay complementary pair")]
    NotGcp,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("variable index {index} out of range 1..={mu}")]
    VariableIndex { index: usize, mu: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("normal matrix is rank deficient or ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Shift a parse error produced on a single line to its position in a file.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { column, message, .. } => Error::Parse { line, column, message },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
