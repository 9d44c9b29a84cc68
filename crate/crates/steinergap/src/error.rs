use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("malformed instance: {0}")]
    Structure(String),
    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(usize, usize),
    #[error("point is not integral")]
    NotIntegral,
    #[error("scale guard: {what} = {value} exceeds {limit} (set STEINERGAP_GUARDS=off to lift)")]
    Guard { what: &'static str, value: usize, limit: usize },
    #[error("point is infeasible: violates {0}")]
    Infeasible(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
