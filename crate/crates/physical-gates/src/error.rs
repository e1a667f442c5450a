use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("inconsistent overlaps between `{first}` and `{second}`: {detail}")]
    Consistency {
        first: String,
        second: String,
        detail: String,
    },
    #[error("assembled output covariance is unphysical (min eigenvalue of V + iΩ = {0:e})")]
    Unphysical(f64),
}
