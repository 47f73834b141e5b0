use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The 2-adic engine could not separate a difference from zero.
    #[error("precision exhausted at P = {precision}")]
    PrecisionExhausted { precision: u32 },

    /// A 2-adic integer description cannot produce the requested bits.
    #[error("horizon error: {0}")]
    Horizon(String),

    #[error("invalid 2-adic spec `{input}`: {reason}")]
    SpecParse { input: String, reason: String },

    /// The recurrence for f disagreed with direct summation.
    #[error("recurrence validation failed at n = {n}")]
    RecurrenceGate { n: u64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
