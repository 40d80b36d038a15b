use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid braid: {0}")]
    Braid(String),

    #[error("generator index {index} out of range for {strands} strands (expected 1..={max})", max = .strands.saturating_sub(1))]
    GeneratorOutOfRange { index: i64, strands: usize },

    #[error("plat closure requires an even number of strands, got {0}")]
    OddPlat(usize),

    #[error("root-of-unity parameter k must be at least 3, got {0}")]
    InvalidK(u32),

    #[error("{what} exceeds cap: {value} > {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),

    #[error("cannot evaluate a Laurent polynomial at zero")]
    EvalAtZero,

    #[error("hadamard test probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("invalid estimator configuration: {0}")]
    Config(String),

    #[error("path {0:?} is not admissible")]
    NotAPath(String),

    #[error("circuit parse error on line {line}: {msg}")]
    CircuitParse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
