use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration key holds an invalid value.
    #[error("invalid config `{key}`: {reason}")]
    InvalidConfig { key: String, reason: String },

    /// P2/P1 <= f(R2): UE2's message can never be decoded, outage is certain.
    #[error("outage-certain region: P2/P1 = {power_ratio} <= f(R2) = {threshold}")]
    OutageCertain { power_ratio: f64, threshold: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}]: error estimate {estimate:e} above tolerance {tolerance:e} after {evaluations} evaluations")]
    Quadrature {
        lo: f64,
        hi: f64,
        estimate: f64,
        tolerance: f64,
        evaluations: usize,
    },

    /// A closed-form probability left [0, 1]; indicates a formula bug.
    #[error("internal error: {name} = {value} outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("grid point {index}: {source}")]
    GridPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("failed to parse {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by user-supplied configuration.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::InvalidConfig { .. } | Error::Parse { .. } | Error::EmptyGrid(_) => true,
            Error::GridPoint { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}
