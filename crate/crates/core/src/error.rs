use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// `(x² + y²) / z` was not an integer, so the triple is off the Markov equation.
    #[error("({numerator}) is not divisible by {divisor}: triple is not on the Markov equation")]
    NotDivisible { numerator: String, divisor: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point ({point}) is not on the surface Psi = {level}")]
    NotOnSurface { point: String, level: String },

    #[error("determinant {0} is not +1 or -1")]
    InvalidDeterminant(i128),

    #[error("matrix with trace {trace} and determinant {det} is not hyperbolic")]
    NotHyperbolic { trace: i64, det: i64 },

    #[error("{left} and {right} are not Farey neighbours")]
    NotNeighbors { left: String, right: String },

    #[error("continued fraction supplies {available} letters, {needed} requested")]
    InsufficientDigits { needed: usize, available: usize },

    #[error("path word has {available} letters, {needed} requested")]
    WordTooShort { needed: usize, available: usize },

    #[error("depth {requested} exceeds the exact depth cap {cap}")]
    DepthExceeded { requested: usize, cap: usize },

    #[error("no return within cap {cap} (guaranteed bound is {bound})")]
    CapExceeded { cap: u64, bound: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("orbit is empty")]
    EmptyOrbit,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
