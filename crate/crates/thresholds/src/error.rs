use gaussian_core::CoreError;
use hom_metrics::HomError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error("coherent output covariance is unphysical (min eigenvalue of V + iΩ = {0:e})")]
    Unphysical(f64),
}
