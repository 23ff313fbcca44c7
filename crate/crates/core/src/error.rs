use crate::dfa_sampler::SamplerReport;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid alphabets: {0}")]
    InvalidAlphabets(String),

    #[error("unknown {kind} symbol '{symbol}'")]
    UnknownSymbol { kind: &'static str, symbol: String },

    #[error("input letter index {0} is outside the input alphabet")]
    LetterOutOfRange(usize),

    #[error("state {state} is outside 0..{num_states}")]
    InvalidState { state: usize, num_states: usize },

    #[error("duplicate transition from state {state} on ({input},{top})")]
    DuplicateTransition {
        state: usize,
        input: String,
        top: String,
    },

    #[error("automaton is not complete: {missing} transitions missing")]
    Incomplete { missing: usize },

    #[error("automaton is not accessible")]
    NotAccessible,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("gave up after {} rejects", .0.rejects)]
    GaveUp(SamplerReport),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
