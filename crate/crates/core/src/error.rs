use num_bigint::BigInt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("negative input {0}")]
    Negative(BigInt),
    #[error("{0} is a perfect square")]
    SquareDiscriminant(BigInt),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a Diophantine tuple: {0}")]
    NotDiophantine(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("argument is not certifiably positive")]
    NonPositive,
    #[error("comparison undecidable at {digits} digits")]
    Undecidable { digits: u32 },
    #[error("precision exhausted: still undecidable after {retries} retries (last precision {digits} digits)")]
    PrecisionExhausted { retries: u32, digits: u32 },
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization failed: {0}")]
    Serialization(String),
}
