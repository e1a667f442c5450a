use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cutoff {cutoff} too small for gain {gain}: probe amplitudes move by {change:e} at 7/8 cutoff, try N = {suggested}")]
    Truncation {
        cutoff: usize,
        gain: f64,
        change: f64,
        suggested: usize,
    },
}
