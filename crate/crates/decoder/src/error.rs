use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bad magic: not an order type encoding")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("truncated input: {0}")]
    Truncated(String),
    #[error("malformed encoding: {0}")]
    Malformed(String),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: u64, n: u64 },
}
