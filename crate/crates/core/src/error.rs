use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    #[error("invalid integration domain: {0}")]
    InvalidDomain(String),

    #[error("integrand returned a non-finite value {value} at {at}")]
    NonFiniteIntegrand { at: f64, value: f64 },

    #[error("quadrature did not converge (estimate {value}, error {error_estimate})")]
    NonConvergence { value: f64, error_estimate: f64 },

    #[error("negative density value {0} (beyond tolerance)")]
    NegativeDensity(f64),

    #[error("special function argument out of domain: {0}")]
    SpecialFunctionDomain(String),

    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid TTE model: {0}")]
    InvalidTte(String),

    #[error("conditioning region has zero probability ({0:e})")]
    ZeroRegionProbability(f64),

    #[error("zero denominator in dependence ratio at ({x}, {y})")]
    ZeroDenominator { x: f64, y: f64 },

    #[error("not a probability vector: {0}")]
    NotAProbabilityVector(String),

    #[error("models are not a symmetric pair: {0}")]
    NotSymmetricPair(String),

    #[error("model does not have the bivariate lack-of-memory property: {0}")]
    NotBlm(String),

    #[error("invalid probability order: {0}")]
    InvalidProbabilityOrder(String),

    #[error("envelope too loose: acceptance rate {0:e}")]
    EnvelopeTooLoose(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
