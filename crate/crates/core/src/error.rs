use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by synthesis, simulation and I/O.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} = {value} outside [{min}, {max}]")]
    Domain {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Singularity(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    NoRoot(String),
    #[error("target force {target} N outside the reachable range [{min}, {max}] N")]
    UnreachableForce { target: f64, min: f64, max: f64 },
    #[error("object at {position} m is beyond stage travel plus converter stroke ({reach} m)")]
    UnreachableObject { position: f64, reach: f64 },
    #[error("actuator stalled at gripping tick {tick}: required {required} N exceeds cap {cap} N")]
    ActuatorStall { tick: usize, required: f64, cap: f64 },
    #[error("positioning stage back-driven at gripping tick {tick} by {reaction} N reaction")]
    BackdriveFault { tick: usize, reaction: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// Stable, machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DomainError",
            Error::Validation(_) => "ValidationError",
            Error::Singularity(_) => "SingularityError",
            Error::Numerical(_) => "NumericalError",
            Error::NoRoot(_) => "NoRootError",
            Error::UnreachableForce { .. } => "UnreachableForce",
            Error::UnreachableObject { .. } => "UnreachableObject",
            Error::ActuatorStall { .. } => "ActuatorStall",
            Error::BackdriveFault { .. } => "BackdriveFault",
            Error::Parse { .. } => "ParseError",
        }
    }

    pub(crate) fn domain(
        quantity: &'static str,
        value: impl Into<f64>,
        min: impl Into<f64>,
        max: impl Into<f64>,
    ) -> Self {
        Error::Domain {
            quantity,
            value: value.into(),
            min: min.into(),
            max: max.into(),
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
