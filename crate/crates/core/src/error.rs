use thiserror::Error;

/// Failure modes of the physical model and its numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// An argument lies outside the mathematical domain of a formula.
    #[error("domain error: {what} must be {requirement}, got {value}")]
    Domain {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// Temperature above the phonon-only model's validity ceiling.
    #[error("temperature {temperature} K exceeds the model validity limit of {limit} K")]
    Validity { temperature: f64, limit: f64 },

    /// Index or target value outside the supported range.
    #[error("range error: {0}")]
    Range(String),

    /// Requested quality factor cannot be reached on the inversion bracket.
    #[error("Q = {q:e} is outside the achievable interval [{q_min:e}, {q_max:e}]")]
    QOutOfRange { q: f64, q_min: f64, q_max: f64 },

    #[error("{routine} did not converge within {iterations} iterations")]
    Convergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// Returns `value` if it is finite and strictly positive.
pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain {
            what,
            requirement: "finite and > 0",
            value,
        })
    }
}

pub(crate) fn non_negative(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ModelError::Domain {
            what,
            requirement: "finite and >= 0",
            value,
        })
    }
}
