use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quantum numbers n = {n}, l = {l}: need n >= 1 and 0 <= l <= n - 1")]
    InvalidQuantumNumbers { n: i64, l: i64 },

    #[error("evaluation at zero of a polynomial with negative powers")]
    ZeroDenominator,

    #[error("argument {0} outside the domain (must be positive)")]
    Domain(f64),

    #[error("exponential overflow at argument {0}; use the scaled evaluator")]
    Overflow(f64),

    #[error("forms use different variables or rates and cannot be combined")]
    ConventionMismatch,

    #[error("quadrature failed: estimated relative error {estimate:.3e} exceeds {limit:.1e}")]
    QuadratureFailure { estimate: f64, limit: f64 },

    #[error("step size too coarse: Richardson disagreement {disagreement:.3e} exceeds {limit:.1e}")]
    StepSizeTooCoarse { disagreement: f64, limit: f64 },

    #[error("outer log-derivative mismatch has no root in [{b_min}, {b_max}]")]
    NoRootInRange {
        b_min: f64,
        b_max: f64,
        /// Scanned `(b, mismatch)` samples, for diagnostics.
        scanned: Vec<(f64, f64)>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid shell configuration: {0}")]
    InvalidShellConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
