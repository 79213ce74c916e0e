use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("real field requested but {0} is not real")]
    NonReal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A factory precondition failed; `certificate` names the violated check.
    #[error("constraint violated [{certificate}]: {detail}")]
    Constraint { certificate: String, detail: String },

    #[error("degenerate parametrization: {0}")]
    DegenerateParametrization(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn constraint(certificate: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Constraint {
            certificate: certificate.into(),
            detail: detail.into(),
        }
    }

    /// Short machine-readable tag used in CLI error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::Parse(_) => "parse",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NonReal(_) => "non_real",
            Error::InvalidInput(_) => "invalid_input",
            Error::Constraint { .. } => "constraint",
            Error::DegenerateParametrization(_) => "degenerate_parametrization",
            Error::SearchExhausted(_) => "search_exhausted",
            Error::Json(_) => "json",
        }
    }
}
