use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision exhausted at iterate {index} ({bits} bits)")]
    PrecisionExhausted { index: usize, bits: u32 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("target not enclosed by the bracket images: {0}")]
    Bracketing(String),

    #[error("monotonicity violated during bisection: {0}")]
    Monotonicity(String),

    #[error("parameter search failed: {0}")]
    Search(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("iteration cap {cap} exceeded: {what}")]
    Cap { cap: u64, what: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("map is not Fibonacci to the required depth: {0}")]
    NotFibonacci(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
