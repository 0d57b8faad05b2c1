use thiserror::Error;

use crate::tropical::TimeValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value {value} exceeds the representable range (t_max = {t_max})")]
    RangeViolation { value: TimeValue, t_max: TimeValue },

    #[error("selector has {finite} finite elements; at most one allowed")]
    NotOneHot { finite: usize },

    #[error("mask element {index} is {value}; masks must be tropically binary (0 or inf)")]
    NotBinary { index: usize, value: TimeValue },

    #[error("register {0} read before it was written")]
    UninitializedRegister(String),

    #[error("no such register: {0}")]
    UnknownRegister(String),

    #[error("no such matrix bank: {0}")]
    UnknownBank(String),

    #[error("register {0} is both a source and the destination of one transition")]
    HazardViolation(String),

    #[error("tick counter overflow")]
    TickOverflow,

    #[error("coincidence window must be at least 1")]
    InvalidEpsilon,

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unbound variable: {0}")]
    UnboundVariable(String),

    #[error("node not found: {0}")]
    NodeNotFound(String),

    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: String, dst: String },

    #[error("invalid nucleotide {0:?}; expected one of G, A, T, C")]
    InvalidAlphabet(char),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem of size {size} exceeds machine width {width}")]
    ExceedsWidth { size: usize, width: usize },

    #[error("iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }

    /// The innermost error, with iteration context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIteration { source, .. } => source.root(),
            other => other,
        }
    }
}
