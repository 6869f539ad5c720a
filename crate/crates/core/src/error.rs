use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the symbolic, geometric and numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed transition matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("symbol {symbol} outside alphabet 1..={m}")]
    SymbolOutOfRange { symbol: usize, m: usize },

    #[error("empty word or stream")]
    Empty,

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("horizon mismatch: {left} vs {right}")]
    HorizonMismatch { left: usize, right: usize },

    #[error("horizon exhausted: position {needed} requested but horizon is {horizon}")]
    HorizonExhausted { needed: usize, horizon: usize },

    #[error("inadmissible transition {from} -> {to} at position {position}")]
    NotAdmissible {
        position: usize,
        from: usize,
        to: usize,
    },

    #[error("matrix lacks the star structure at symbol {symbol}: {reason}")]
    NotStar { symbol: usize, reason: String },

    #[error("budget exceeded: {needed} items requested, budget is {budget}")]
    BudgetExceeded { needed: String, budget: usize },

    #[error(
        "power iteration did not converge after {iterations} iterations (last estimate {last})"
    )]
    NonConvergence { iterations: usize, last: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("row {row} cannot cover its targets: minimum feasible lambda is {min_lambda}")]
    Infeasible { row: usize, min_lambda: f64 },

    #[error("pieces {i} and {j} are not positively separated (gap {gap})")]
    Separation { i: usize, j: usize, gap: f64 },

    #[error("empty basic set for word {word}")]
    EmptyIntersection { word: String },

    #[error("orbit escaped at step {step} (point {point}): {reason}")]
    Escape {
        step: usize,
        point: f64,
        reason: String,
    },

    #[error("payload exhausted at template position {position}")]
    PayloadExhausted { position: usize },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("degenerate least-squares fit: {0}")]
    DegenerateFit(String),

    #[error("numeric guard: {0}")]
    NumericGuard(String),
}
