use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs {needed_bytes} bytes, ceiling is {ceiling_bytes} bytes")]
    Capacity { what: String, needed_bytes: u64, ceiling_bytes: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported parameter k = {0} (supported: 1, 2, 3)")]
    UnsupportedK(u32),
    #[error("exact-mode cap exceeded: x = {x} > cap {cap}")]
    CapExceeded { x: u64, cap: u64 },
    #[error("prefix table covers [1, {limit}] but x = {x} was requested")]
    PrefixTooShort { limit: u64, x: u64 },
    #[error("unknown function id `{0}`")]
    UnknownFunction(String),
    #[error("figure {figure} requires a {expected} series")]
    WrongKind { figure: u32, expected: &'static str },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
