use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A matrix that has to be inverted is singular, ill-conditioned or not positive definite.
    #[error("numerical error: {0}")]
    Numeric(String),
}
