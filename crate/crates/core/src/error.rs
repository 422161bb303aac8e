use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frequency is not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("first frequency value {value} is negative")]
    NegativeFirst { value: f64 },
    #[error("generator disagrees with stored prefix at index {index}")]
    GeneratorMismatch { index: usize },
    #[error("index {index} exceeds the available frequency range ({available})")]
    RangeExceeded { index: usize, available: usize },
    #[error("degenerate pair: lambda_{m} equals lambda_{n}")]
    DegeneratePair { m: usize, n: usize },
    #[error("frequency vanishes at the tail index {index}")]
    ZeroFrequencyTail { index: usize },
    #[error("x must be positive, got {0}")]
    NonPositiveX(f64),
    #[error("sampling schedule is empty")]
    ScheduleEmpty,
    #[error("lambda_{index} is zero")]
    ZeroLambda { index: usize },
    #[error("first frequency is zero")]
    Lambda1Zero,
    #[error("function evaluation failed at s = {re}{im:+}i")]
    EvaluationFailure { re: f64, im: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation too small: tail bound {tail_bound:e} exceeds tolerance {tolerance:e}")]
    TruncationTooSmall { tail_bound: f64, tolerance: f64 },
    #[error("contour tail dominates: tail bound {tail_bound:e} exceeds tolerance {tolerance:e}")]
    TailDominates { tail_bound: f64, tolerance: f64 },
    #[error("order k = {k} is below 1; Perron tails are not controllable without override")]
    NonintegrableOrder { k: f64 },
    #[error("frequencies {index} and {next} are closer than {floor:e}")]
    IllSeparated { index: usize, next: usize, floor: f64 },
    #[error("graded mesh did not resolve the endpoint singularity (estimate {estimate:e})")]
    SingularityUnresolved { estimate: f64 },
    #[error("norm of the limit function is below {floor:e}")]
    ZeroNorm { floor: f64 },
    #[error("tolerance not reached on the grid; largest deviation {largest_deviation:e}")]
    NotReached { largest_deviation: f64 },
    #[error("acceleration stagnated at s = {re}{im:+}i")]
    PrecisionLoss { re: f64, im: f64 },
    #[error("series is not over the ordinary frequency (log n)")]
    WrongFrequency,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("tolerance failure: {0}")]
    ToleranceFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn eval_failure(s: num_complex::Complex64) -> Self {
        Error::EvaluationFailure { re: s.re, im: s.im }
    }
}
