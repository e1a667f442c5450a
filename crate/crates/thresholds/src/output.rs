//! The output threshold: the largest HOM element of any coherent-state mixture.

use physical_gates::GateModel;

use crate::error::ThresholdError;
use crate::kernel::CoherentKernel;

/// `e^{−2}`: `(1/4) e^{−u} u²` at its maximum `u = |α|² + |β|² = 2`.
pub fn output_threshold() -> f64 {
    (-2.0f64).exp()
}

/// Brute-force maximum of the coherent HOM element over `|α|, |β| ≤ bound`
/// on a `points × points` grid, with `α` real and `β` imaginary (the phases
/// that maximize `|α² − β²|`). Evaluated through the Gaussian engine.
pub fn verify_output_threshold(points: usize, bound: f64) -> Result<(f64, (f64, f64)), ThresholdError> {
    if points < 2 || !(bound > 0.0) {
        return Err(ThresholdError::Domain(format!("grid {points} x {points} on [0, {bound}] is empty")));
    }
    let kernel = CoherentKernel::new(&GateModel::ideal_qnd(0.0), 1e-3)?;
    let h = bound / (points - 1) as f64;
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
    for i in 0..points {
        for j in 0..points {
            let (a, b) = (i as f64 * h, j as f64 * h);
            let v = kernel.element(&[2.0 * a, 0.0, 0.0, 2.0 * b]);
            if v > best.0 {
                best = (v, (a, b));
            }
        }
    }
    Ok(best)
}
