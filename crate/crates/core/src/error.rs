use thiserror::Error;

/// Errors produced by evaluations, checks and simulations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the requested evaluation is defined.
    #[error("domain error in {func}: {reason}")]
    Domain { func: &'static str, reason: String },

    /// The argument hits a pole of the function.
    #[error("pole of {func} at {at}")]
    Pole { func: &'static str, at: String },

    /// Requested expansion order exceeds what the truncation caps can represent.
    #[error("truncation order {requested} exceeds available order {available}")]
    TruncationOrder { requested: u32, available: u32 },

    /// A lattice window is too small for the neighbour access an operation needs.
    #[error("lattice window too small: {0}")]
    Window(String),

    /// A state left the region where the equations of motion are regular.
    #[error("singular state at step {step}, site {site} (time {time}): {reason}")]
    Singular {
        step: usize,
        site: usize,
        time: f64,
        reason: String,
    },

    /// Dispersionless evolution crossed the gradient-catastrophe threshold.
    #[error("gradient catastrophe detected at time {time}: max|u_x| grew from {initial} to {current}")]
    Catastrophe {
        time: f64,
        initial: f64,
        current: f64,
    },

    /// Not enough data to perform a fit or a check.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An adaptive routine failed to reach its tolerance.
    #[error("no convergence in {func}: {reason}")]
    NoConvergence { func: &'static str, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            func,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
