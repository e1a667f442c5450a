//! Nonclassicality thresholds for the HOM element.
//!
//! The output threshold bounds any mixture of coherent states at the gate
//! output. The input threshold is the best a gate can do with
//! phase-randomized coherent inputs, so it depends on the gate.

pub mod error;
pub mod input;
pub mod kernel;
pub mod output;
pub mod search;

pub use error::ThresholdError;
pub use input::{
    input_threshold, input_threshold_ideal, PhaseAverageOptions, ThresholdResult, ThresholdWarning, PHASE_TOL,
};
pub use kernel::CoherentKernel;
pub use output::{output_threshold, verify_output_threshold};
pub use search::{find_crossing, maximize_scalar, simplex_maximize, CROSSING_TOL};
