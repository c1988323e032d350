use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code
/// (see [`crate::cli::ExitCode`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("{function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// A variance-budget schedule violates its monotonicity or positivity rules.
    #[error("invalid rho schedule: {0}")]
    Schedule(String),

    /// The learner was asked to act after the final round.
    #[error("game over: round {round} exceeds horizon {horizon}")]
    GameOver { round: usize, horizon: usize },

    /// The game protocol was violated (for example a non-Boolean gradient fed
    /// to a Boolean-only learner).
    #[error("protocol violation at round {round}: {detail}")]
    Protocol { round: usize, detail: String },

    /// A computation produced a non-finite or otherwise unusable value.
    #[error("numeric fault: {0}")]
    Numeric(String),

    /// An experiment configuration field is missing or invalid.
    #[error("config error in field `{field}`: {detail}")]
    Config { field: String, detail: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
