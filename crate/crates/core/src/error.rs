use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing value for variable {0}")]
    MissingVariable(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("germ order {have} too low, need {need}")]
    OrderTooLow { have: u32, need: u32 },
    #[error("degenerate sample after {0} attempts")]
    DegenerateSample(u32),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("singular jacobian")]
    SingularJacobian,
    #[error("G44 vanishes")]
    ZeroG44,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
