use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown time-function kind `{0}`")]
    UnknownKind(String),

    #[error("invalid time function: {0}")]
    InvalidTimeFunction(String),

    #[error("time {t} lies outside the domain [{start}, {end}]")]
    OutOfDomain { t: f64, start: f64, end: f64 },

    #[error("quadrature did not converge within {nodes} nodes (last change {change:e})")]
    QuadratureNotConverged { nodes: usize, change: f64 },

    #[error("invalid scenario: {0}")]
    Validation(ValidationErrors),

    #[error("sin(wT) = {modulus:e} is below the singularity threshold")]
    SingularSine { modulus: f64 },

    #[error(
        "stability guard tripped: |wT| = {wt_modulus} exceeds {limit} for resolution {resolution}"
    )]
    StabilityGuard {
        resolution: f64,
        wt_modulus: f64,
        limit: f64,
    },

    #[error("small-frequency series used outside its range (|wT| = {wt_modulus})")]
    SeriesOutOfRange { wt_modulus: f64 },

    #[error(
        "lattice quadratic form is near-singular at N = {n} (condition estimate {condition:e})"
    )]
    NearSingular { n: usize, condition: f64 },

    #[error("extrapolation refused: {0}")]
    Extrapolation(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("{0} is not finite")]
    NonFinite(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

/// One violated invariant, named by a dotted field path such as `beam_a.resolution`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

/// Every invariant violation found while validating a scenario.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationErrors(pub Vec<Violation>);

impl ValidationErrors {
    pub(crate) fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(Violation {
            field: field.into(),
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.0.iter()
    }

    /// True when some violation names `field` exactly.
    pub fn names(&self, field: &str) -> bool {
        self.0.iter().any(|v| v.field == field)
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.field, v.message)?;
        }
        Ok(())
    }
}
