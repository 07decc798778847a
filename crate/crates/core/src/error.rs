use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("resource limit: {what} = {requested} exceeds cap {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error(
        "no convergence after {iterations} iterations (worst correction {worst:e}): {context}"
    )]
    NonConvergence {
        iterations: usize,
        worst: f64,
        context: String,
    },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("winding number ambiguous: {0}")]
    WindingAmbiguity(String),

    #[error("refinement failed: {0}")]
    Refinement(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
