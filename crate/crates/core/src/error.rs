use thiserror::Error;

/// Errors raised by the chaos algebra, the operator layer and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("factorial overflow guard: order {order} exceeds {limit}")]
    FactorialOverflow { order: u32, limit: u32 },

    #[error("characteristic set of the zero multi-index is empty")]
    EmptyIndex,

    #[error("non-positive base {value} at position {position}")]
    NonPositiveBase { position: usize, value: f64 },

    #[error("missing value for position {0}")]
    MissingCoordinate(usize),

    #[error("Hermite order {0} exceeds the supported maximum 60")]
    HermiteOrder(u32),

    #[error("incompatible coefficient spaces: {0}")]
    IncompatibleSpaces(String),

    #[error("result of order {order} exceeds truncation box (max order {max_order}, max modes {max_modes})")]
    BoxOverflow {
        order: u32,
        max_order: u32,
        max_modes: usize,
    },

    #[error("invalid multi-index encoding `{0}`")]
    ParseIndex(String),

    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),

    #[error("time ordering violated: t = {t} < s = {s}")]
    TimeOrder { t: f64, s: f64 },

    #[error("time {t} outside [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },

    #[error("mode {k} out of range 1..={bound}")]
    ModeOutOfRange { k: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("index set of size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("solver produced non-finite values at multi-index {0}")]
    Divergence(String),

    #[error("level {level} deviates by {deviation:e}, above the tolerance {tolerance:e}")]
    Mismatch {
        level: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("direction h is not sufficiently small relative to the weight sequence")]
    NotSmall,

    #[error("operation requires deterministic data: {0}")]
    NonDeterministicData(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error in key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
