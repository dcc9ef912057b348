use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("node index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid weight pattern: {0}")]
    InvalidPattern(String),

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("partition is not equitable ({violations} violation(s))")]
    NotEquitable { violations: usize },

    #[error("leader set is empty")]
    EmptyLeaders,

    #[error("pattern has no edges")]
    EmptyPattern,

    #[error("{followers} followers exceed the enumeration cap of {cap}; raise --cap or shrink the pattern")]
    CapExceeded { followers: usize, cap: usize },

    #[error("constraint system is infeasible: {0}")]
    Infeasible(String),

    #[error("weight sampling gave up after {attempts} attempts; edge ({from},{to}) kept violating its requirements")]
    SamplingExhausted {
        from: usize,
        to: usize,
        attempts: usize,
    },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
