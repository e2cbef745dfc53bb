use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by any module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("machine class ({states},{symbols}) is invalid: {reason}")]
    InvalidMachineClass {
        states: u8,
        symbols: u8,
        reason: &'static str,
    },

    #[error("rule space of class ({states},{symbols}) overflows a 64-bit count")]
    SpaceSizeOverflow { states: u8, symbols: u8 },

    #[error("machine index {index} out of range (space size {space})")]
    IndexOutOfRange { index: u64, space: u64 },

    #[error("invalid transition table: {0}")]
    InvalidTable(String),

    #[error("neighborhood width {width} unsupported (max 5)")]
    UnsupportedWidth { width: u8 },

    #[error("rule number {number} out of range (space size {space})")]
    RuleOutOfRange { number: u64, space: u64 },

    #[error("rule reflection requires a symmetric neighborhood, got ({left},{right})")]
    AsymmetricNeighborhood { left: u8, right: u8 },

    #[error("word length {k} out of supported range 1..=16")]
    WordLengthOutOfRange { k: u8 },

    #[error("word length mismatch: {left} vs {right}")]
    WordLengthMismatch { left: u8, right: u8 },

    #[error("distribution is empty (total count 0)")]
    EmptyDistribution,

    #[error("rank correlation undefined: all counts tied in one distribution")]
    DegenerateRanking,

    #[error("sample size {size} exceeds space size {space}")]
    SampleTooLarge { size: u64, space: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid word {0:?}: expected a nonempty string of 0s and 1s, length <= 16")]
    BadWordText(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
