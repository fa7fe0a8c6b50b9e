use thiserror::Error;

/// Errors raised by the estimation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("{polynomial} polynomial has a root at {re:.6}{im:+.6}i with modulus {modulus:.6} (must lie outside the unit circle)")]
    NonStationary {
        polynomial: &'static str,
        re: f64,
        im: f64,
        modulus: f64,
    },

    #[error("memory parameter d = {0} is outside (-0.5, 0.5); integrate a stationary path instead")]
    MemoryOutOfRange(f64),

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("non-finite observation at index {0}")]
    NonFinite(usize),

    #[error("lag {lag} out of range for a series of length {n}")]
    LagOutOfRange { lag: usize, n: usize },

    #[error("spectral density has a pole at frequency zero when d > 0 (d = {0})")]
    Pole(f64),

    #[error("frequency {0} outside (0, pi]")]
    FrequencyOutOfRange(f64),

    #[error("truncation point M = {m} must satisfy 1 <= M and n - M >= 2 (n = {n})")]
    Truncation { m: usize, n: usize },

    #[error("robust autocorrelation undefined at lag {0}: both Qn terms are zero")]
    UndefinedCorrelation(usize),

    #[error("periodogram ordinate at j = {j} (omega = {omega:.6}) is not positive; log regression impossible")]
    DegeneratePeriodogram { j: usize, omega: f64 },

    #[error("bandwidth m' = {m} outside [3, {max}]")]
    Bandwidth { m: usize, max: usize },

    #[error("only {retained} of {requested} frequencies have a positive robust pseudo-periodogram ({dropped} dropped); need at least 3")]
    TooFewFrequencies {
        requested: usize,
        retained: usize,
        dropped: usize,
    },

    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cell {cell}: {failures} of {replicates} replicates failed (limit 1%); first failure: {first}")]
    TooManyFailures {
        cell: String,
        failures: usize,
        replicates: usize,
        first: String,
    },

    #[error("report serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
