use thiserror::Error;

/// Errors raised by the library. The CLI maps all of them to exit code 1
/// except quadrature and certification failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precision must be at least {min} bits, got {bits}")]
    PrecisionTooLow { bits: u32, min: u32 },

    #[error("unsupported Bessel order {0}")]
    UnsupportedOrder(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i64, m: i64 },

    #[error("gcd({h}, {k}) != 1")]
    NotCoprime { h: i64, k: i64 },

    #[error("k = {k} is not in the congruence class required by {what}")]
    ClassMismatch { k: i64, what: String },

    #[error("power series with constant term {0} is not invertible over the integers")]
    SeriesNotInvertible(String),

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: u64, cap: u64 },

    #[error("quadrature stopped after {evaluations} evaluations with error estimate {estimate:e} > {tol:e}")]
    RefinementCap {
        evaluations: usize,
        estimate: f64,
        tol: f64,
    },

    #[error("reduction produced a non-integral shift: {0}")]
    NonIntegralShift(String),
}

pub type Result<T> = std::result::Result<T, Error>;
