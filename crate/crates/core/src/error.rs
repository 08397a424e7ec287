use thiserror::Error;

pub type Result<T> = std::result::Result<T, PsaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PsaError {
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),

    #[error("parameter `{name}` out of range: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("coefficients belong to configuration {found:?}, expected {expected:?}")]
    ConfigMismatch {
        expected: crate::fwm::Configuration,
        found: crate::fwm::Configuration,
    },

    #[error("integrator hit the step cap ({steps} steps) at z = {z} m")]
    MaxStepsExceeded { steps: usize, z: f64 },

    #[error("probe depletes the pumps (relative pump power change {relative_change:e})")]
    ProbeTooLarge { relative_change: f64 },

    #[error("denominator of {which} vanishes ({value:e})")]
    PoleDetected { which: &'static str, value: f64 },
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(PsaError::NonFinite(name))
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> PsaError {
    PsaError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
