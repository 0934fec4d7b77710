use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gaussian integrand is not integrable: Re(p) = {0} must be positive")]
    NotIntegrable(f64),

    #[error("invalid integration interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("adaptive quadrature did not converge: error estimate {estimate:e} after {intervals} intervals")]
    QuadratureNotConverged { estimate: f64, intervals: usize },

    #[error("invalid beamsplitter: {0}")]
    InvalidBeamsplitter(String),

    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),

    #[error("logical state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid detection configuration: {0}")]
    InvalidDetection(String),

    #[error("operation requires a windowed (probability) truth table")]
    NotWindowed,

    #[error("similarity is undefined for an all-zero truth table")]
    ZeroTable,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("time grid does not cover the wavepacket (captured norm {0})")]
    InsufficientCoverage(f64),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
