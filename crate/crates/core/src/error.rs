use thiserror::Error;

use crate::fit::FitError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation received a value that violates its contract.
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("`{field}` = {value} is outside the supported range {range}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error(
        "kinetic inductance would be negative: geometric inductance {l_geo:e} H/m already exceeds \
         the {l_total:e} H/m required by the measured resonance"
    )]
    NegativeKineticInductance { l_geo: f64, l_total: f64 },

    #[error("singular nodal matrix at {frequency_hz:e} Hz")]
    SingularNodalMatrix { frequency_hz: f64 },

    #[error("`{field}` must not be empty")]
    EmptyGrid { field: &'static str },

    #[error("every point of the spectrum has etalon transmission below {threshold}")]
    AllBelowThreshold { threshold: f64 },

    #[error("no bias in [{lo}, {hi}] V gives the requested value")]
    NoSolution { lo: f64, hi: f64 },

    #[error(transparent)]
    Fit(#[from] FitError),
}

pub(crate) fn finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be finite, got {value}"),
        })
    }
}

pub(crate) fn positive(field: &'static str, value: f64) -> Result<f64> {
    finite(field, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be > 0, got {value}"),
        })
    }
}

pub(crate) fn non_negative(field: &'static str, value: f64) -> Result<f64> {
    finite(field, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be >= 0, got {value}"),
        })
    }
}
