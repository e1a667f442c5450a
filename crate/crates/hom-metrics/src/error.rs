use gaussian_core::CoreError;
use physical_gates::GateError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("output term {term} is unphysical (min eigenvalue of V + iΩ = {min_eigenvalue:e})")]
    Unphysical { term: usize, min_eigenvalue: f64 },
}
