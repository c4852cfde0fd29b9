use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector must have at least one entry")]
    EmptyVector,
    #[error("entry {index} is {value}, expected a strictly positive finite number")]
    NonPositiveEntry { index: usize, value: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{which} is not sorted nondecreasingly at index {index}")]
    NotSorted { which: &'static str, index: usize },
    #[error("weights sum to {sum}, expected 1")]
    WeightsNotNormalized { sum: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("entry {index} is {value}, expected > 1")]
    EntryNotAboveOne { index: usize, value: f64 },
    #[error("exponent {0} must be negative")]
    NonNegativeExponent(f64),
    #[error("pairing search exceeded its budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },
    #[error("x = {x} lies outside [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("triple entries sum to {0}, expected 0")]
    NotZeroSum(f64),
    #[error("sums of squares differ: {left} vs {right}")]
    SumOfSquaresMismatch { left: f64, right: f64 },
    #[error("degenerate triple: {0}")]
    DegenerateTriple(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("hypothesis `{hypothesis}` violated at t = {t}")]
    HypothesisViolatedAt { t: f64, hypothesis: String },
    #[error("not a probability vector: {0}")]
    NotProbabilityVector(String),
    #[error("shift {0} is negative")]
    NegativeShift(f64),
    #[error("optimizer did not reach a feasible point (best residual {residual})")]
    DidNotConverge { residual: f64 },
    #[error("sampler {sampler} exhausted {tries} retries")]
    RetryExhausted { sampler: &'static str, tries: u32 },
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}
