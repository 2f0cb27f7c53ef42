use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: not deterministic: second transition for state {state} on '{symbol}'")]
    DuplicateTransition {
        line: usize,
        state: usize,
        symbol: String,
    },

    #[error("state {state} out of range (machine has {count} states)")]
    StateOutOfRange { state: usize, count: usize },

    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol index {index} not in alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },

    #[error("operation requires a deterministic machine")]
    NotDeterministic,

    #[error("operation requires a one-way machine")]
    NotOneWay,

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("invalid crossing sequence {0:?}")]
    InvalidCrossingSequence(Vec<usize>),

    #[error("word enumeration budget exceeded: {words} words requested, cap is {cap}")]
    WordBudgetExceeded { words: u128, cap: u128 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("empty input")]
    EmptyInput,
}
