use thiserror::Error;

/// Errors surfaced by library operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("alphabet mismatch: left has {left:?}, right has {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },

    #[error("operation requires variant ({expected}) but system is ({got})")]
    WrongVariant { expected: &'static str, got: &'static str },

    #[error("{what} exceeded resource budget ({used} > {limit}); raise {knob} to allow more")]
    ResourceExceeded {
        what: &'static str,
        used: usize,
        limit: usize,
        knob: &'static str,
    },

    #[error("word length {len} with {symbols}-symbol alphabet does not fit the packed word encoding")]
    WordTooWide { len: usize, symbols: usize },

    #[error("witness family {family} requires n >= {min}, got {n}")]
    WitnessTooSmall {
        family: &'static str,
        min: usize,
        n: usize,
    },

    #[error("no bound is known for this combination: {0}")]
    UnknownBound(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
