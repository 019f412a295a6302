use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A query position or range lies outside the indexed string.
    #[error("{what} {value} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid range [{start}..{end}] for length {len}")]
    InvalidRange { start: usize, end: usize, len: usize },

    #[error("block parameter tau = {tau} not allowed for length {len}: {reason}")]
    InvalidTau {
        tau: usize,
        len: usize,
        reason: &'static str,
    },

    /// An input array that cannot come from any string.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// An index built in one mode was asked a question only the other mode answers.
    #[error("mode mismatch: {0}")]
    ModeMismatch(&'static str),

    /// Build-time self check failed; the structural lemma the index relies on was violated.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    /// Query-time lookup hit a record that cannot be right.
    #[error("index corrupted: {0}")]
    Corrupt(String),

    #[error("bad magic bytes")]
    BadMagic,

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),

    #[error("checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },

    #[error("truncated input: {0}")]
    Truncated(&'static str),

    #[error("format error: {0}")]
    Format(String),
}
